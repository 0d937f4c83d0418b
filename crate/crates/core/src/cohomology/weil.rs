//! Order-by-order conjugation of a formal deformation into a subgroup.
//!
//! A formal curve is given in exponential coordinates: generator `s` maps to
//! `exp(Σⱼ aⱼ(s) tʲ) ρ(s)` with `aⱼ(s) ∈ sp(2,1)`. The representation `ρ`
//! takes values in a subgroup `H` whose Lie algebra `𝔥` is spanned by a set
//! of coordinates. At order `j` the conjugator `exp(vⱼ tʲ)` is found by
//! solving `d0(vⱼ) = -aⱼ mod 𝔥` in least squares; a nonzero residual means
//! the class in `H¹(Γ, 𝔤/𝔥)` is not zero.

use nalgebra::{DMatrix, DVector};

use super::complex::adjoint_matrix;
use crate::error::{Error, Result};
use crate::linalg::lstsq;
use crate::qcore::{HMat, LieElement};
use crate::surfrep::{Letter, Presentation};

/// Truncated power series with matrix coefficients.
pub type Series = Vec<HMat>;

fn zero_series(order: usize) -> Series {
    vec![HMat::zeros(3, 3); order + 1]
}

fn constant(m: &HMat, order: usize) -> Series {
    let mut s = zero_series(order);
    s[0] = m.clone();
    s
}

pub fn series_mul(a: &Series, b: &Series) -> Series {
    let n = a.len() - 1;
    let mut out = zero_series(n);
    for i in 0..=n {
        for j in 0..=n - i {
            out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
        }
    }
    out
}

/// `exp(X)` for a series with zero constant term.
pub fn series_exp(x: &Series) -> Series {
    let n = x.len() - 1;
    let mut out = constant(&HMat::identity(3), n);
    let mut term = out.clone();
    for k in 1..=n {
        term = series_mul(&term, x).into_iter().map(|m| m.scale(&(1.0 / k as f64))).collect();
        out = out.iter().zip(&term).map(|(a, b)| a + b).collect();
    }
    out
}

/// `log(S)` for a series with constant term `I`.
pub fn series_log(s: &Series) -> Series {
    let n = s.len() - 1;
    let mut y = s.clone();
    y[0] = HMat::zeros(3, 3);
    let mut out = zero_series(n);
    let mut pow = constant(&HMat::identity(3), n);
    for k in 1..=n {
        pow = series_mul(&pow, &y);
        let c = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        out = out.iter().zip(&pow).map(|(a, b)| a + &b.scale(&c)).collect();
    }
    out
}

fn lie_series(coeffs: &[LieElement], order: usize) -> Series {
    let mut s = zero_series(order);
    for (j, a) in coeffs.iter().enumerate().take(order) {
        s[j + 1] = a.to_matrix();
    }
    s
}

/// Inverse of a series taking values in Sp(2,1).
fn series_sp_inverse(s: &Series) -> Series {
    s.iter().map(|m| m.sp_inverse()).collect()
}

/// Result of [`weil_normalize`].
#[derive(Debug, Clone)]
pub struct WeilResult {
    /// `v₁, …, v_N`; the conjugator is `exp(v_N t^N) ⋯ exp(v₁ t)`.
    pub v: Vec<LieElement>,
    /// `b[j][s]`: order-`(j+1)` coefficient of the conjugated curve at generator `s`.
    pub b: Vec<Vec<LieElement>>,
    /// Largest off-`𝔥` coefficient of the conjugated curve.
    pub residual: f64,
}

impl WeilResult {
    pub fn conjugator(&self) -> Series {
        let n = self.v.len();
        let mut g = constant(&HMat::identity(3), n);
        for (j, v) in self.v.iter().enumerate() {
            let mut x = zero_series(n);
            x[j + 1] = v.to_matrix();
            g = series_mul(&series_exp(&x), &g);
        }
        g
    }
}

/// The formal curve `s ↦ exp(Σ aⱼ(s) tʲ) ρ(s)`.
pub fn formal_curve(images: &[HMat], coeffs: &[Vec<LieElement>]) -> Vec<Series> {
    let order = coeffs.len();
    images
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let a: Vec<LieElement> = coeffs.iter().map(|c| c[s]).collect();
            series_mul(&series_exp(&lie_series(&a, order)), &constant(m, order))
        })
        .collect()
}

/// Largest coefficient of order `1..=N` in the relator series, per order.
pub fn relator_defect(pres: &Presentation, curve: &[Series]) -> Vec<f64> {
    let order = curve[0].len() - 1;
    let mut r = constant(&HMat::identity(3), order);
    for &Letter { gen, inv } in &pres.relator.0 {
        let f = if inv { series_sp_inverse(&curve[gen]) } else { curve[gen].clone() };
        r = series_mul(&r, &f);
    }
    r[1..].iter().map(|m| m.max_abs()).collect()
}

/// Coefficients of `log(curve(s) ρ(s)⁻¹)`.
fn exp_coordinates(curve: &[Series], images: &[HMat]) -> Vec<Vec<LieElement>> {
    let order = curve[0].len() - 1;
    let logs: Vec<Series> = curve.iter().zip(images).map(|(c, m)| series_log(&series_mul(c, &constant(&m.sp_inverse(), order)))).collect();
    (1..=order).map(|j| logs.iter().map(|l| LieElement::project(&l[j])).collect()).collect()
}

/// Conjugate the formal curve into `H` order by order.
///
/// `coeffs[j][s]` is the order-`(j+1)` coefficient at generator `s`; `subalgebra`
/// lists the coordinates spanning `𝔥`. `ρ` must preserve `𝔥` and its
/// coordinate complement.
pub fn weil_normalize(pres: &Presentation, images: &[HMat], coeffs: &[Vec<LieElement>], subalgebra: &[usize], tol: f64) -> Result<WeilResult> {
    let order = coeffs.len();
    let n = pres.num_generators;
    if images.len() != n || coeffs.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch { expected: format!("{n} generators"), got: images.len().to_string() });
    }
    if order == 0 {
        return Ok(WeilResult { v: vec![], b: vec![], residual: 0.0 });
    }
    let comp: Vec<usize> = (0..21).filter(|k| !subalgebra.contains(k)).collect();
    let ads: Vec<DMatrix<f64>> = images.iter().map(adjoint_matrix).collect();
    for a in &ads {
        let leak = comp.iter().flat_map(|&r| subalgebra.iter().map(move |&c| (r, c))).map(|(r, c)| a[(r, c)].abs().max(a[(c, r)].abs())).fold(0.0, f64::max);
        if leak > 1e-8 {
            return Err(Error::DomainError(format!("representation does not preserve the subalgebra (leak {leak:e})")));
        }
    }
    let mut curve = formal_curve(images, coeffs);
    for (j, &d) in relator_defect(pres, &curve).iter().enumerate() {
        let scale = coeffs[..=j].iter().flatten().map(|x| x.max_abs()).fold(1.0, f64::max);
        if d > tol * scale.powi(j as i32 + 1) {
            return Err(Error::NotHomomorphism { order: j + 1, residual: d });
        }
    }
    let m = comp.len();
    let mut d0 = DMatrix::zeros(n * m, m);
    for (s, a) in ads.iter().enumerate() {
        for (i, &r) in comp.iter().enumerate() {
            for (k, &c) in comp.iter().enumerate() {
                d0[(s * m + i, k)] = if r == c { 1.0 } else { 0.0 } - a[(r, c)];
            }
        }
    }
    let mut vs = Vec::with_capacity(order);
    for j in 1..=order {
        let a = &exp_coordinates(&curve, images)[j - 1];
        let rhs = DVector::from_iterator(n * m, a.iter().flat_map(|x| comp.iter().map(move |&c| -x.0[c])));
        let sol = lstsq(&d0, &rhs);
        let residual = (&d0 * &sol - &rhs).norm();
        if residual > tol * rhs.norm().max(1.0) {
            return Err(Error::ObstructionNonzero(j));
        }
        let mut v = LieElement::zero();
        for (k, &c) in comp.iter().enumerate() {
            v.0[c] = sol[k];
        }
        let mut x = zero_series(order);
        x[j] = v.to_matrix();
        let g = series_exp(&x);
        let gi = series_sp_inverse(&g);
        curve = curve.iter().map(|c| series_mul(&series_mul(&g, c), &gi)).collect();
        vs.push(v);
    }
    let b = exp_coordinates(&curve, images);
    let residual = b.iter().flatten().flat_map(|x| comp.iter().map(move |&c| x.0[c].abs())).fold(0.0, f64::max);
    Ok(WeilResult { v: vs, b, residual })
}

/// Synthetic data for `⟨a | a⁵⟩`: `ρ(a) = diag(e^{2πi/5}, e^{4πi/5}, 1)` in
/// `Sp(1) × Sp(1,1)`, and the curve `h(t)⁻¹ ρ h(t)` with `h = exp(w₁t + w₂t²)`
/// for `w₁, w₂` in the ℍ² block. Returns `(images, coeffs, h)`.
pub fn cyclic_round_trip_data(w: &[LieElement]) -> (Vec<HMat>, Vec<Vec<LieElement>>, Series) {
    use std::f64::consts::PI;
    let rot = |th: f64| crate::qcore::Quat::complex(th.cos(), th.sin());
    let rho = HMat::diag(vec![rot(2.0 * PI / 5.0), rot(4.0 * PI / 5.0), crate::qcore::Quat::one()]);
    let order = w.len();
    let h = series_exp(&lie_series(w, order));
    let curve = series_mul(&series_mul(&series_sp_inverse(&h), &constant(&rho, order)), &h);
    let images = vec![rho];
    let coeffs = exp_coordinates(&[curve], &images);
    (images, coeffs, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::complex::{CochainComplex, ModuleBlock};
    use crate::qcore::Block;
    use crate::sample;
    use crate::surfrep::fuchsian_su11_rep;

    fn h_coords() -> Vec<usize> {
        Block::Sp1.range().chain(Block::Sp11.range()).collect()
    }

    fn h2_element(r: &mut impl rand::Rng) -> LieElement {
        let mut x = sample::lie(r, 0.5);
        for k in h_coords() {
            x.0[k] = 0.0;
        }
        x
    }

    #[test]
    fn exp_and_log_are_inverse() {
        let mut r = sample::rng(2);
        let x: Series = std::iter::once(HMat::zeros(3, 3)).chain((0..3).map(|_| sample::lie(&mut r, 1.0).to_matrix())).collect();
        let back = series_log(&series_exp(&x));
        for (a, b) in x.iter().zip(&back) {
            assert!(a.dist(b) < 1e-12);
        }
    }

    #[test]
    fn cyclic_round_trip_recovers_conjugator() {
        let mut r = sample::rng(4);
        let w = vec![h2_element(&mut r), h2_element(&mut r)];
        let (images, coeffs, h) = cyclic_round_trip_data(&w);
        let res = weil_normalize(&Presentation::cyclic(5), &images, &coeffs, &h_coords(), 1e-9).unwrap();
        assert!(res.residual < 1e-10);
        for (v, w) in res.v.iter().zip(&w) {
            assert!((*v - *w).max_abs() < 1e-10);
        }
        for (a, b) in res.conjugator().iter().zip(&h) {
            assert!(a.dist(b) < 1e-10);
        }
    }

    #[test]
    fn coefficients_already_in_h_need_no_conjugation() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let cc = CochainComplex::for_rep(&rep, ModuleBlock::Sp1).unwrap();
        let u = cc.h1_basis()[0].embed(&[0, 1, 2], 21);
        let a1: Vec<LieElement> = (0..4).map(|s| u.lie_value(s)).collect();
        let res = weil_normalize(&rep.one_relator(), &rep.images, &[a1.clone()], &h_coords(), 1e-9).unwrap();
        assert_eq!(res.v[0].max_abs(), 0.0);
        for (b, a) in res.b[0].iter().zip(&a1) {
            assert!((*b - *a).max_abs() < 1e-12);
        }
    }

    #[test]
    fn surface_h2_class_is_obstructed() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let cc = CochainComplex::for_rep(&rep, ModuleBlock::H2).unwrap();
        let u = cc.h1_basis()[0].embed(&Block::H2.range().collect::<Vec<_>>(), 21);
        let a1: Vec<LieElement> = (0..4).map(|s| u.lie_value(s)).collect();
        let err = weil_normalize(&rep.one_relator(), &rep.images, &[a1], &h_coords(), 1e-9).unwrap_err();
        assert_eq!(err, Error::ObstructionNonzero(1));
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let mut a1 = vec![LieElement::zero(); 4];
        a1[0] = LieElement::basis(3);
        let err = weil_normalize(&rep.one_relator(), &rep.images, &[a1], &h_coords(), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotHomomorphism { order: 1, .. }));
    }
}
