use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hmatrix::HMat;
use super::quaternion::Quat;
use super::scalar::DEFAULT_TOL;
use crate::error::{Error, Result};

/// A complex matrix of even size `2n × 2n`, the image of an `n × n` quaternionic matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(pub DMatrix<Complex64>);

impl CMatrix {
    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    /// `J = [[0, -I], [I, 0]]` of size `2n`.
    pub fn j(n: usize) -> CMatrix {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = -Complex64::new(1.0, 0.0);
            m[(n + i, i)] = Complex64::new(1.0, 0.0);
        }
        CMatrix(m)
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix(self.0.map(|z| z.conj()))
    }

    /// `½(M - J M̄ J)`, the ℍ-linear part of `M`.
    pub fn quaternionic_part(&self) -> CMatrix {
        let j = CMatrix::j(self.size() / 2).0;
        CMatrix((&self.0 - &j * self.conj().0 * &j) * Complex64::new(0.5, 0.0))
    }

    /// Largest entry of `MJ - J M̄`.
    pub fn quaternionic_residual(&self) -> f64 {
        let j = CMatrix::j(self.size() / 2).0;
        let d = &self.0 * &j - &j * self.conj().0;
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Image of `A` under ℍ ⊂ M₂(ℂ), `α + jβ ↦ [[α, -β̄], [β, ᾱ]]`, blockwise.
///
/// Coordinates are ordered `(z₁…zₙ, w₁…wₙ)` for the vector `z + j w`.
pub fn complexify(a: &HMat) -> CMatrix {
    let (r, c) = (a.nrows(), a.ncols());
    let mut m = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for k in 0..c {
            let q = &a[(i, k)];
            let alpha = Complex64::new(q.re, q.im_i);
            let beta = Complex64::new(q.im_j, -q.im_k);
            m[(i, k)] = alpha;
            m[(i, c + k)] = -beta.conj();
            m[(r + i, k)] = beta;
            m[(r + i, c + k)] = alpha.conj();
        }
    }
    CMatrix(m)
}

/// Quaternionic preimage of `M`; fails unless `MJ = J M̄` within `tol`.
pub fn realify_tol(m: &CMatrix, tol: f64) -> Result<HMat> {
    let s = m.size();
    if s % 2 != 0 || m.0.ncols() != s {
        return Err(Error::DimensionMismatch {
            expected: "even square size".into(),
            got: format!("{}x{}", m.0.nrows(), m.0.ncols()),
        });
    }
    let residual = m.quaternionic_residual();
    if residual > tol {
        return Err(Error::NotQuaternionic { residual });
    }
    Ok(realify_unchecked(m))
}

pub fn realify(m: &CMatrix) -> Result<HMat> {
    realify_tol(m, DEFAULT_TOL)
}

/// Read off the quaternion entries from the `α` and `β` blocks without checking.
pub fn realify_unchecked(m: &CMatrix) -> HMat {
    let n = m.size() / 2;
    let mut a = HMat::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let alpha = m.0[(i, k)];
            let beta = m.0[(n + i, k)];
            a[(i, k)] = Quat::new(alpha.re, alpha.im, beta.re, -beta.im);
        }
    }
    a
}

/// Complex coordinates `(z, w)` of a quaternionic vector `z + j w`.
pub fn complexify_vec(v: &[Quat]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = v.iter().map(|q| Complex64::new(q.re, q.im_i)).collect();
    out.extend(v.iter().map(|q| Complex64::new(q.im_j, -q.im_k)));
    out
}

/// Inverse of [`complexify_vec`].
pub fn realify_vec(x: &[Complex64]) -> Vec<Quat> {
    let n = x.len() / 2;
    (0..n).map(|i| Quat::new(x[i].re, x[i].im, x[n + i].re, -x[n + i].im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::quaternion::qmul;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn j_squares_to_minus_identity() {
        let j = CMatrix::j(3).0;
        let sq = &j * &j;
        let minus_i = -DMatrix::<Complex64>::identity(6, 6);
        assert_eq!(sq, minus_i);
    }

    #[test]
    fn complexify_of_j() {
        let a = HMat::diag(vec![Quat::j()]);
        let m = complexify(&a);
        assert_eq!(m.0, DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]));
        assert_eq!(realify(&m).unwrap(), a);
    }

    #[test]
    fn complexify_identity() {
        let m = complexify(&HMat::identity(3));
        assert_eq!(m.0, DMatrix::identity(6, 6));
    }

    #[test]
    fn diag_one_two_is_not_quaternionic() {
        let m = CMatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(2., 0.)])));
        assert!(matches!(realify(&m), Err(Error::NotQuaternionic { .. })));
    }

    #[test]
    fn quaternionic_part_realifies() {
        let m = CMatrix(DMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 * 0.7 - 2.0, (i as f64) - 0.5 * j as f64)));
        assert!(realify(&m.quaternionic_part()).is_ok());
    }

    #[test]
    fn vector_action_matches_left_multiplication() {
        let a = HMat::from_rows(vec![
            vec![Quat::new(1., 2., 3., 4.), Quat::new(0., -1., 0.5, 2.)],
            vec![Quat::new(-1., 0., 1., 0.), Quat::new(0.3, 0.2, 0.1, -0.4)],
        ])
        .unwrap();
        let v = vec![Quat::new(0.1, 0.2, -0.3, 0.4), Quat::new(2., -1., 0., 1.)];
        let lhs = complexify_vec(&a.mul_vec(&v));
        let rhs = &complexify(&a).0 * nalgebra::DVector::from_vec(complexify_vec(&v));
        for (x, y) in lhs.iter().zip(rhs.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
        // right multiplication by j maps (z, w) to (-w̄, z̄)
        let vj: Vec<Quat> = v.iter().map(|x| qmul(x, &Quat::j())).collect();
        let cv = complexify_vec(&v);
        let cvj = complexify_vec(&vj);
        assert!((cvj[0] + cv[2].conj()).norm() < 1e-12);
        assert!((cvj[2] - cv[0].conj()).norm() < 1e-12);
    }
}
