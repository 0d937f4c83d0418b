use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_rational::BigRational;

use super::quaternion::{qmul, Quat, Quaternion};
use super::scalar::{Scalar, DEFAULT_TOL};
use crate::error::{Error, Result};

/// A dense matrix of quaternions, stored row-major.
///
/// Column vectors form a right ℍ-module; matrices act on the left.
#[derive(Clone, PartialEq)]
pub struct HMatrix<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<Quaternion<T>>,
}

pub type HMat = HMatrix<f64>;
pub type HMatExact = HMatrix<BigRational>;

/// A column vector in ℍⁿ.
pub type HVec = Vec<Quat>;

impl<T: Scalar> HMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        HMatrix { nrows, ncols, entries: vec![Quaternion::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: format!("rows of length {ncols}"),
                got: "ragged rows".into(),
            });
        }
        Ok(HMatrix { nrows, ncols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn diag(d: Vec<Quaternion<T>>) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, q) in d.into_iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    /// The form matrix `J' = diag(1, …, 1, -1)` of size `n+1`.
    pub fn j_prime(n: usize) -> Self {
        let mut m = Self::identity(n + 1);
        m[(n, n)] = -Quaternion::one();
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn rows(&self) -> Vec<Vec<Quaternion<T>>> {
        self.entries.chunks(self.ncols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.ncols),
                got: format!("{} rows", other.nrows),
            });
        }
        let mut m = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                for j in 0..other.ncols {
                    let p = qmul(a, &other[(k, j)]);
                    m[(i, j)] += p;
                }
            }
        }
        Ok(m)
    }

    /// Multiply every entry on the right by `q`.
    pub fn mul_right_scalar(&self, q: &Quaternion<T>) -> Self {
        self.map(|e| qmul(e, q))
    }

    /// Multiply every entry on the left by `q`.
    pub fn mul_left_scalar(&self, q: &Quaternion<T>) -> Self {
        self.map(|e| qmul(q, e))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|e| e.scale(s))
    }

    pub fn map(&self, f: impl Fn(&Quaternion<T>) -> Quaternion<T>) -> Self {
        HMatrix { nrows: self.nrows, ncols: self.ncols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.entries.iter().all(|q| q.is_negligible(tol))
    }

    pub fn to_f64(&self) -> HMat {
        HMatrix { nrows: self.nrows, ncols: self.ncols, entries: self.entries.iter().map(|q| q.to_f64()).collect() }
    }

    /// Inverse of an element of Sp(n,1) via `J' A* J'`.
    pub fn sp_inverse(&self) -> Self {
        let n = self.nrows - 1;
        let jp = Self::j_prime(n);
        &(&jp * &self.adjoint()) * &jp
    }

    /// Residual matrix `A* J' A - J'`.
    fn sp_defect(&self, n: usize) -> Result<Self> {
        check_square(self, n + 1)?;
        let jp = Self::j_prime(n);
        Ok(&(&self.adjoint() * &jp) * self - jp)
    }

    fn sp_lie_defect(&self, n: usize) -> Result<Self> {
        check_square(self, n + 1)?;
        let jp = Self::j_prime(n);
        Ok(&self.adjoint() * &jp + &jp * self)
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut m = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.nrows {
            for j in 0..b.ncols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion<T>> {
        (0..self.nrows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Quaternion<T>]) -> Vec<Quaternion<T>> {
        (0..self.nrows)
            .map(|i| {
                let mut acc = Quaternion::zero();
                for (j, x) in v.iter().enumerate() {
                    acc += qmul(&self[(i, j)], x);
                }
                acc
            })
            .collect()
    }
}

fn check_square<T: Scalar>(a: &HMatrix<T>, size: usize) -> Result<()> {
    if a.nrows != size || a.ncols != size {
        return Err(Error::DimensionMismatch {
            expected: format!("{size}x{size}"),
            got: format!("{}x{}", a.nrows, a.ncols),
        });
    }
    Ok(())
}

/// Whether `A* J' A = J'`, exactly for rationals and within `tol` for floats.
pub fn is_in_sp_tol<T: Scalar>(a: &HMatrix<T>, n: usize, tol: f64) -> Result<bool> {
    Ok(a.sp_defect(n)?.is_negligible(tol))
}

pub fn is_in_sp<T: Scalar>(a: &HMatrix<T>, n: usize) -> Result<bool> {
    is_in_sp_tol(a, n, DEFAULT_TOL)
}

/// Whether `X* J' + J' X = 0`.
pub fn is_in_sp_lie_tol<T: Scalar>(x: &HMatrix<T>, n: usize, tol: f64) -> Result<bool> {
    Ok(x.sp_lie_defect(n)?.is_negligible(tol))
}

pub fn is_in_sp_lie<T: Scalar>(x: &HMatrix<T>, n: usize) -> Result<bool> {
    is_in_sp_lie_tol(x, n, DEFAULT_TOL)
}

/// Largest absolute entry of `A* J' A - J'`.
pub fn sp_residual(a: &HMat) -> f64 {
    a.sp_defect(a.nrows - 1).map_or(f64::INFINITY, |d| d.max_abs())
}

impl HMat {
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &HMat) -> f64 {
        (self - other).norm()
    }

    /// Commutator `AB - BA`.
    pub fn bracket(&self, other: &HMat) -> HMat {
        &(self * other) - &(other * self)
    }

    /// Quaternionic Hermitian form of signature (n,1): `Σ conj(u_i) J'_ii v_i`.
    pub fn form(u: &[Quat], v: &[Quat]) -> Quat {
        let n = u.len();
        let mut acc = Quat::zero();
        for i in 0..n {
            let t = qmul(&u[i].conj(), &v[i]);
            if i + 1 == n {
                acc = acc - t;
            } else {
                acc += t;
            }
        }
        acc
    }

    /// Matrix exponential, computed on the complexification.
    pub fn exp(&self) -> HMat {
        let c = super::complexify::complexify(self);
        super::complexify::realify_unchecked(&super::complexify::CMatrix(c.0.exp()))
    }

    /// General inverse through the complexification; `None` if singular.
    pub fn try_inverse(&self) -> Option<HMat> {
        let c = super::complexify::complexify(self);
        c.0.try_inverse().map(|m| super::complexify::realify_unchecked(&super::complexify::CMatrix(m)))
    }

    /// Real matrix viewed quaternionically.
    pub fn from_real(rows: &[Vec<f64>]) -> HMat {
        let r = rows.iter().map(|row| row.iter().map(|&x| Quat::real(x)).collect()).collect();
        HMatrix::from_rows(r).expect("rectangular input")
    }
}

impl<T: Scalar> Index<(usize, usize)> for HMatrix<T> {
    type Output = Quaternion<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion<T> {
        &self.entries[i * self.ncols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for HMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion<T> {
        &mut self.entries[i * self.ncols + j]
    }
}

impl<T: Scalar> Mul for &HMatrix<T> {
    type Output = HMatrix<T>;
    fn mul(self, o: &HMatrix<T>) -> HMatrix<T> {
        self.try_mul(o).expect("matrix dimensions agree")
    }
}

impl<T: Scalar> Mul for HMatrix<T> {
    type Output = HMatrix<T>;
    fn mul(self, o: HMatrix<T>) -> HMatrix<T> {
        &self * &o
    }
}

impl<T: Scalar> Add for &HMatrix<T> {
    type Output = HMatrix<T>;
    fn add(self, o: &HMatrix<T>) -> HMatrix<T> {
        assert_eq!((self.nrows, self.ncols), (o.nrows, o.ncols));
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.clone() + b.clone()).collect();
        HMatrix { nrows: self.nrows, ncols: self.ncols, entries }
    }
}

impl<T: Scalar> Add for HMatrix<T> {
    type Output = HMatrix<T>;
    fn add(self, o: HMatrix<T>) -> HMatrix<T> {
        &self + &o
    }
}

impl<T: Scalar> Sub for &HMatrix<T> {
    type Output = HMatrix<T>;
    fn sub(self, o: &HMatrix<T>) -> HMatrix<T> {
        assert_eq!((self.nrows, self.ncols), (o.nrows, o.ncols));
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.clone() - b.clone()).collect();
        HMatrix { nrows: self.nrows, ncols: self.ncols, entries }
    }
}

impl<T: Scalar> Sub for HMatrix<T> {
    type Output = HMatrix<T>;
    fn sub(self, o: HMatrix<T>) -> HMatrix<T> {
        &self - &o
    }
}

impl<T: Scalar> Neg for HMatrix<T> {
    type Output = HMatrix<T>;
    fn neg(self) -> HMatrix<T> {
        self.map(|q| -q.clone())
    }
}

impl<T: Scalar> fmt::Debug for HMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::scalar::rat;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quat {
        Quat::new(a, b, c, d)
    }

    #[test]
    fn identity_is_in_sp21() {
        assert!(is_in_sp(&HMat::identity(3), 2).unwrap());
        assert!(is_in_sp(&HMatExact::identity(3), 2).unwrap());
    }

    #[test]
    fn unit_scalar_corner_is_in_sp21() {
        let u = q(0.5, 0.5, 0.5, 0.5);
        let a = HMat::diag(vec![u, Quat::one(), Quat::one()]);
        assert!(is_in_sp(&a, 2).unwrap());
    }

    #[test]
    fn doubling_corner_leaves_sp21() {
        let a = HMatExact::diag(vec![QuatExact::real(rat(2, 1)), QuatExact::one(), QuatExact::one()]);
        assert!(!is_in_sp(&a, 2).unwrap());
    }

    #[test]
    fn wrong_size_is_dimension_mismatch() {
        let err = is_in_sp(&HMat::identity(2), 2).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn lie_membership_examples() {
        let x = HMat::diag(vec![Quat::i(), Quat::zero(), Quat::zero()]);
        assert!(is_in_sp_lie(&x, 2).unwrap());
        let y = HMat::diag(vec![Quat::one(), Quat::zero(), Quat::zero()]);
        assert!(!is_in_sp_lie(&y, 2).unwrap());

        // column (x1, x2) below the corner and the row Y = -x* J1 beside it
        let x1 = q(1.0, 2.0, -1.0, 0.5);
        let x2 = q(-0.3, 0.0, 1.0, 2.0);
        let mut z = HMat::zeros(3, 3);
        z[(1, 0)] = x1.clone();
        z[(2, 0)] = x2.clone();
        z[(0, 1)] = -x1.conj();
        z[(0, 2)] = x2.conj();
        assert!(is_in_sp_lie(&z, 2).unwrap());
    }

    #[test]
    fn sp_inverse_is_inverse() {
        let a = HMat::from_real(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2f64.cosh(), 2f64.sinh()],
            vec![0.0, 2f64.sinh(), 2f64.cosh()],
        ]);
        let a = a.mul_left_scalar(&Quat::one());
        let prod = &a * &a.sp_inverse();
        assert!(prod.dist(&HMat::identity(3)) < 1e-12);
    }

    use crate::qcore::quaternion::QuatExact;
}
