use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::qcore::complexify::{complexify, realify_unchecked, CMatrix};
use crate::qcore::{HMat, LieElement, Quat};

type CM = DMatrix<Complex64>;

fn db_sqrt(a: &CM) -> Option<CM> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = CM::identity(n, n);
    let mut prev = f64::INFINITY;
    for _ in 0..100 {
        let yi = y.clone().try_inverse()?;
        let zi = z.clone().try_inverse()?;
        let y2 = (&y + zi) * Complex64::new(0.5, 0.0);
        let z2 = (&z + yi) * Complex64::new(0.5, 0.0);
        let step = (&y2 - &y).norm();
        y = y2;
        z = z2;
        if !y.norm().is_finite() {
            return None;
        }
        let rel = step / y.norm();
        if rel <= 1e-15 || (rel < 1e-9 && rel >= prev) {
            return Some(y);
        }
        prev = rel;
    }
    None
}

fn principal_log(a: &CM) -> Option<CM> {
    let n = a.nrows();
    let id = CM::identity(n, n);
    let mut m = a.clone();
    let mut k = 0;
    while (&m - &id).norm() > 0.2 {
        if k >= 60 {
            return None;
        }
        m = db_sqrt(&m)?;
        k += 1;
    }
    let x = &m - &id;
    let mut pow = id.clone();
    let mut out = CM::zeros(n, n);
    for j in 1..=40 {
        pow = &pow * &x;
        let c = if j % 2 == 1 { 1.0 } else { -1.0 } / j as f64;
        out += &pow * Complex64::new(c, 0.0);
    }
    Some(out * Complex64::new(2f64.powi(k), 0.0))
}

/// Logarithm in sp(2,1) via inverse scaling and squaring with Denman–Beavers square roots.
pub fn log_sp(g: &HMat) -> Result<LieElement> {
    let c = complexify(g).0;
    let l = principal_log(&c).ok_or(Error::LogDivergent)?;
    let back = l.clone().exp();
    if (&back - &c).norm() > 1e-8 * c.norm() {
        return Err(Error::LogDivergent);
    }
    let x = realify_unchecked(&CMatrix(l));
    let y = LieElement::project(&x);
    if y.to_matrix().dist(&x) > 1e-8 * x.norm().max(1.0) {
        return Err(Error::LogDivergent);
    }
    Ok(y)
}

/// Real Lie algebra generated by logarithms of a set of group elements.
#[derive(Debug, Clone)]
pub struct LieClosure {
    pub dim: usize,
    /// Orthonormal in coordinates.
    pub basis: Vec<LieElement>,
}

const CLOSURE_TOL: f64 = 1e-7;

fn insert(basis: &mut Vec<LieElement>, x: &LieElement) -> bool {
    let mut w = *x;
    for _ in 0..2 {
        for b in basis.iter() {
            let c: f64 = b.0.iter().zip(&w.0).map(|(p, q)| p * q).sum();
            w = w - b.scale(c);
        }
    }
    let n = w.norm();
    if n <= CLOSURE_TOL * x.norm().max(1e-300) || n <= 1e-12 {
        return false;
    }
    basis.push(w.scale(1.0 / n));
    true
}

/// Logs of the generators (or of their squares when the principal log fails),
/// then bracket closure until the dimension stabilizes.
pub fn lie_closure(gens: &[HMat]) -> Result<LieClosure> {
    let mut basis: Vec<LieElement> = Vec::new();
    for g in gens {
        let l = log_sp(g).or_else(|_| log_sp(&(g * g)))?;
        insert(&mut basis, &l);
    }
    let mut done = 0;
    while done < basis.len() && basis.len() < 21 {
        let k = done;
        for i in 0..=k {
            let b = basis[i].bracket(&basis[k]);
            insert(&mut basis, &b);
            if basis.len() == 21 {
                break;
            }
        }
        done += 1;
    }
    Ok(LieClosure { dim: basis.len(), basis })
}

fn basis_matrix(k: usize) -> HMat {
    let mut m = HMat::zeros(3, 3);
    let mut c = [0.0; 4];
    c[k % 4] = 1.0;
    m[(k / 12, (k / 4) % 3)] = Quat::new(c[0], c[1], c[2], c[3]);
    m
}

/// Real dimension of `{X ∈ M₃(ℍ) : X g = g X for every generator}`.
pub fn commutant_dim(gens: &[HMat]) -> usize {
    let n = gens.len();
    let mut a = DMatrix::zeros(36 * n, 36);
    for k in 0..36 {
        let x = basis_matrix(k);
        for (s, g) in gens.iter().enumerate() {
            let d = &(&x * g) - &(g * &x);
            for (e, q) in d.entries().iter().enumerate() {
                for (c, v) in q.components().iter().enumerate() {
                    a[(36 * s + 4 * e + c, k)] = *v;
                }
            }
        }
    }
    36 - rank(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::surfrep::{fuchsian_so21_rep, fuchsian_su11_rep};

    #[test]
    fn log_inverts_exp() {
        let mut r = sample::rng(8);
        for _ in 0..5 {
            let x = sample::lie(&mut r, 0.8);
            let l = log_sp(&x.to_matrix().exp()).unwrap();
            assert!((l - x).max_abs() < 1e-9);
        }
    }

    #[test]
    fn basis_matrices_cover_all_entries() {
        let mut seen = std::collections::HashSet::new();
        for k in 0..36 {
            let m = basis_matrix(k);
            let pos = (0..9).find(|&e| m.entries()[e] != Quat::zero()).unwrap();
            assert!(seen.insert((pos, k % 4)));
        }
    }

    #[test]
    fn fuchsian_closures() {
        let so = fuchsian_so21_rep(2).unwrap();
        assert_eq!(lie_closure(&so.images).unwrap().dim, 3);
        assert_eq!(commutant_dim(&so.images), 4);
        let su = fuchsian_su11_rep(2).unwrap();
        assert_eq!(lie_closure(&su.images).unwrap().dim, 3);
        assert_eq!(commutant_dim(&su.images), 8);
    }

    #[test]
    fn random_elements_generate_everything() {
        let mut r = sample::rng(5);
        let gens: Vec<HMat> = (0..2).map(|_| sample::sp21(&mut r, 0.5)).collect();
        assert_eq!(lie_closure(&gens).unwrap().dim, 21);
        assert_eq!(commutant_dim(&gens), 1);
    }
}
