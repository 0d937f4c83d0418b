//! Coordinates on sp(2,1).
//!
//! A [`LieElement`] holds 21 reals. With `X` the 3×3 quaternionic matrix
//! and `J' = diag(1,1,-1)`:
//!
//! | range    | block      | entries                                        |
//! |----------|------------|------------------------------------------------|
//! | `0..3`   | sp(1)      | `i,j,k` parts of `X₀₀`                          |
//! | `3..7`   | ℍ²         | `X₁₀` as `[re,i,j,k]`                           |
//! | `7..11`  | ℍ²         | `X₂₀` as `[re,i,j,k]`                           |
//! | `11..14` | sp(1,1)    | `i,j,k` parts of `X₁₁`                          |
//! | `14..17` | sp(1,1)    | `i,j,k` parts of `X₂₂`                          |
//! | `17..21` | sp(1,1)    | `X₁₂` as `[re,i,j,k]`                           |
//!
//! The remaining entries are forced: `X₀₁ = -conj(X₁₀)`, `X₀₂ = conj(X₂₀)`,
//! `X₂₁ = conj(X₁₂)`.

use std::ops::{Add, Neg, Sub};

use super::hmatrix::{is_in_sp_lie_tol, HMat};
use super::quaternion::Quat;
use crate::error::{Error, Result};

pub const DIM: usize = 21;

/// Coordinate blocks of sp(2,1) = sp(1) ⊕ ℍ² ⊕ sp(1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Sp1,
    H2,
    Sp11,
}

impl Block {
    pub fn range(self) -> std::ops::Range<usize> {
        match self {
            Block::Sp1 => 0..3,
            Block::H2 => 3..11,
            Block::Sp11 => 11..21,
        }
    }

    pub fn of(index: usize) -> Block {
        match index {
            0..=2 => Block::Sp1,
            3..=10 => Block::H2,
            _ => Block::Sp11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieElement(pub [f64; DIM]);

impl Default for LieElement {
    fn default() -> Self {
        LieElement([0.0; DIM])
    }
}

fn imag_of(v: &[f64]) -> Quat {
    Quat::new(0.0, v[0], v[1], v[2])
}

fn quat_of(v: &[f64]) -> Quat {
    Quat::new(v[0], v[1], v[2], v[3])
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_slice(v: &[f64]) -> Self {
        let mut c = [0.0; DIM];
        c.copy_from_slice(&v[..DIM]);
        LieElement(c)
    }

    /// The `k`th coordinate basis vector.
    pub fn basis(k: usize) -> Self {
        let mut c = [0.0; DIM];
        c[k] = 1.0;
        LieElement(c)
    }

    pub fn coords(&self) -> &[f64; DIM] {
        &self.0
    }

    pub fn to_matrix(&self) -> HMat {
        let c = &self.0;
        let x10 = quat_of(&c[3..7]);
        let x20 = quat_of(&c[7..11]);
        let x12 = quat_of(&c[17..21]);
        let mut m = HMat::zeros(3, 3);
        m[(0, 0)] = imag_of(&c[0..3]);
        m[(1, 0)] = x10.clone();
        m[(2, 0)] = x20.clone();
        m[(0, 1)] = -x10.conj();
        m[(0, 2)] = x20.conj();
        m[(1, 1)] = imag_of(&c[11..14]);
        m[(2, 2)] = imag_of(&c[14..17]);
        m[(1, 2)] = x12.clone();
        m[(2, 1)] = x12.conj();
        m
    }

    /// Read coordinates off `X`, which must satisfy `X*J' + J'X = 0` within `tol`.
    pub fn from_matrix_tol(x: &HMat, tol: f64) -> Result<Self> {
        if !is_in_sp_lie_tol(x, 2, tol)? {
            return Err(Error::NotInGroup { residual: (&x.adjoint() * &HMat::j_prime(2) + &HMat::j_prime(2) * x).max_abs() });
        }
        Ok(Self::project(x))
    }

    pub fn from_matrix(x: &HMat) -> Result<Self> {
        Self::from_matrix_tol(x, 1e-9)
    }

    /// Orthogonal projection of an arbitrary 3×3 matrix onto sp(2,1),
    /// averaging the paired entries.
    pub fn project(x: &HMat) -> Self {
        let mut c = [0.0; DIM];
        let put_imag = |c: &mut [f64; DIM], at: usize, q: &Quat| {
            c[at] = q.im_i;
            c[at + 1] = q.im_j;
            c[at + 2] = q.im_k;
        };
        let put = |c: &mut [f64; DIM], at: usize, q: &Quat| {
            c[at..at + 4].copy_from_slice(&q.components());
        };
        put_imag(&mut c, 0, &x[(0, 0)]);
        put(&mut c, 3, &((x[(1, 0)].clone() - x[(0, 1)].conj()).scale(&0.5)));
        put(&mut c, 7, &((x[(2, 0)].clone() + x[(0, 2)].conj()).scale(&0.5)));
        put_imag(&mut c, 11, &x[(1, 1)]);
        put_imag(&mut c, 14, &x[(2, 2)]);
        put(&mut c, 17, &((x[(1, 2)].clone() + x[(2, 1)].conj()).scale(&0.5)));
        LieElement(c)
    }

    /// Copy supported on `block`, zero elsewhere.
    pub fn restrict(&self, block: Block) -> Self {
        let mut c = [0.0; DIM];
        for k in block.range() {
            c[k] = self.0[k];
        }
        LieElement(c)
    }

    /// `(sp1_part, h2_part, sp11_part)`.
    pub fn decompose(&self) -> (Self, Self, Self) {
        (self.restrict(Block::Sp1), self.restrict(Block::H2), self.restrict(Block::Sp11))
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self::project(&self.to_matrix().bracket(&other.to_matrix()))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x *= s);
        LieElement(c)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Invariant form `B(X,Y) = Re tr(XY)`.
pub fn trace_form(x: &HMat, y: &HMat) -> f64 {
    let p = x * y;
    (0..p.nrows()).map(|i| p[(i, i)].re).sum()
}

impl Add for LieElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(o.0.iter()).for_each(|(a, b)| *a += b);
        LieElement(c)
    }
}

impl Sub for LieElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for LieElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(seed: u64) -> LieElement {
        let mut c = [0.0; DIM];
        let mut s = seed;
        for x in c.iter_mut() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *x = ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
        }
        LieElement(c)
    }

    #[test]
    fn basis_matrices_are_in_the_algebra_and_round_trip() {
        for k in 0..DIM {
            let e = LieElement::basis(k);
            let m = e.to_matrix();
            assert!(is_in_sp_lie_tol(&m, 2, 0.0).unwrap(), "basis {k}");
            assert_eq!(LieElement::from_matrix(&m).unwrap(), e);
        }
    }

    #[test]
    fn block_ranges_partition() {
        let total: usize = [Block::Sp1, Block::H2, Block::Sp11].iter().map(|b| b.range().len()).sum();
        assert_eq!(total, DIM);
    }

    #[test]
    fn decompose_zero_and_corner() {
        let (a, b, c) = LieElement::zero().decompose();
        assert_eq!((a, b, c), (LieElement::zero(), LieElement::zero(), LieElement::zero()));
        let x = LieElement::from_matrix(&HMat::diag(vec![Quat::i(), Quat::zero(), Quat::zero()])).unwrap();
        let (a, b, c) = x.decompose();
        assert_eq!(a, x);
        assert_eq!(b, LieElement::zero());
        assert_eq!(c, LieElement::zero());
    }

    #[test]
    fn decompose_sums_and_outer_blocks_commute() {
        for seed in 0..20 {
            let x = sample(seed);
            let (a, b, c) = x.decompose();
            assert!((a + b + c - x).max_abs() == 0.0);
            assert!(a.to_matrix().bracket(&c.to_matrix()).max_abs() < 1e-14);
        }
    }

    #[test]
    fn block_brackets_land_in_expected_range() {
        for seed in 0..20 {
            let (a, b, c) = sample(seed).decompose();
            let ab = a.bracket(&b);
            let cb = c.bracket(&b);
            for k in 0..DIM {
                if Block::of(k) != Block::H2 {
                    assert!(ab.0[k].abs() < 1e-14);
                    assert!(cb.0[k].abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn non_member_is_rejected() {
        let x = HMat::diag(vec![Quat::one(), Quat::zero(), Quat::zero()]);
        assert!(LieElement::from_matrix(&x).is_err());
    }
}
