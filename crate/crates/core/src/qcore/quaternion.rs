use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::scalar::Scalar;

/// A quaternion `re + im_i·i + im_j·j + im_k·k`.
///
/// JSON form is the 4-array `[re, i, j, k]`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 4]", into = "[T; 4]")]
#[serde(bound(serialize = "T: Clone + Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Quaternion<T> {
    pub re: T,
    pub im_i: T,
    pub im_j: T,
    pub im_k: T,
}

pub type Quat = Quaternion<f64>;
pub type QuatExact = Quaternion<BigRational>;

impl<T> From<[T; 4]> for Quaternion<T> {
    fn from([re, im_i, im_j, im_k]: [T; 4]) -> Self {
        Quaternion { re, im_i, im_j, im_k }
    }
}

impl<T> From<Quaternion<T>> for [T; 4] {
    fn from(q: Quaternion<T>) -> Self {
        [q.re, q.im_i, q.im_j, q.im_k]
    }
}

impl<T: fmt::Debug> fmt::Debug for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i + {:?}j + {:?}k)", self.re, self.im_i, self.im_j, self.im_k)
    }
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(re: T, im_i: T, im_j: T, im_k: T) -> Self {
        Quaternion { re, im_i, im_j, im_k }
    }

    pub fn zero() -> Self {
        Self::real(T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(re: T) -> Self {
        Quaternion::new(re, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Quaternion::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// Complex number `a + b i` viewed as a quaternion.
    pub fn complex(a: T, b: T) -> Self {
        Quaternion::new(a, b, T::zero(), T::zero())
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(
            self.re.clone(),
            -self.im_i.clone(),
            -self.im_j.clone(),
            -self.im_k.clone(),
        )
    }

    /// Imaginary part (real part stripped).
    pub fn imag(&self) -> Self {
        Quaternion::new(T::zero(), self.im_i.clone(), self.im_j.clone(), self.im_k.clone())
    }

    /// `|q|^2 = q conj(q)`, always real.
    pub fn norm_sq(&self) -> T {
        self.re.clone() * self.re.clone()
            + self.im_i.clone() * self.im_i.clone()
            + self.im_j.clone() * self.im_j.clone()
            + self.im_k.clone() * self.im_k.clone()
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.re.clone() * s.clone(),
            self.im_i.clone() * s.clone(),
            self.im_j.clone() * s.clone(),
            self.im_k.clone() * s.clone(),
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Quaternion::new(
            c.re / n.clone(),
            c.im_i / n.clone(),
            c.im_j / n.clone(),
            c.im_k / n,
        ))
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.re.is_negligible(tol)
            && self.im_i.is_negligible(tol)
            && self.im_j.is_negligible(tol)
            && self.im_k.is_negligible(tol)
    }

    pub fn to_f64(&self) -> Quat {
        Quaternion::new(self.re.to_f64(), self.im_i.to_f64(), self.im_j.to_f64(), self.im_k.to_f64())
    }

    pub fn components(&self) -> [T; 4] {
        [self.re.clone(), self.im_i.clone(), self.im_j.clone(), self.im_k.clone()]
    }
}

impl Quat {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.re.abs().max(self.im_i.abs()).max(self.im_j.abs()).max(self.im_k.abs())
    }

    /// Unit quaternion `exp(v)` for a purely imaginary `v`.
    pub fn exp_imag(v: &Quat) -> Quat {
        let theta = v.imag().norm();
        if theta < 1e-300 {
            return Quat::one();
        }
        let s = theta.sin() / theta;
        Quat::new(theta.cos(), v.im_i * s, v.im_j * s, v.im_k * s)
    }
}

/// Hamilton product.
pub fn qmul<T: Scalar>(p: &Quaternion<T>, q: &Quaternion<T>) -> Quaternion<T> {
    let (a1, b1, c1, d1) = (&p.re, &p.im_i, &p.im_j, &p.im_k);
    let (a2, b2, c2, d2) = (&q.re, &q.im_i, &q.im_j, &q.im_k);
    Quaternion::new(
        a1.clone() * a2.clone() - b1.clone() * b2.clone() - c1.clone() * c2.clone() - d1.clone() * d2.clone(),
        a1.clone() * b2.clone() + b1.clone() * a2.clone() + c1.clone() * d2.clone() - d1.clone() * c2.clone(),
        a1.clone() * c2.clone() - b1.clone() * d2.clone() + c1.clone() * a2.clone() + d1.clone() * b2.clone(),
        a1.clone() * d2.clone() + b1.clone() * c2.clone() - c1.clone() * b2.clone() + d1.clone() * a2.clone(),
    )
}

pub fn qconj<T: Scalar>(q: &Quaternion<T>) -> Quaternion<T> {
    q.conj()
}

pub fn qimag<T: Scalar>(q: &Quaternion<T>) -> Quaternion<T> {
    q.imag()
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.re + o.re, self.im_i + o.im_i, self.im_j + o.im_j, self.im_k + o.im_k)
    }
}

impl<T: Scalar> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, o: Self) {
        *self = self.clone() + o;
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.re - o.re, self.im_i - o.im_i, self.im_j - o.im_j, self.im_k - o.im_k)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.re, -self.im_i, -self.im_j, -self.im_k)
    }
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        qmul(&self, &o)
    }
}

impl<'a, T: Scalar> Mul<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, o: &'a Quaternion<T>) -> Quaternion<T> {
        qmul(self, o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::scalar::rat;

    #[test]
    fn defining_relations() {
        assert_eq!(qmul(&Quat::i(), &Quat::j()), Quat::k());
        assert_eq!(qmul(&Quat::j(), &Quat::k()), Quat::i());
        assert_eq!(qmul(&Quat::k(), &Quat::i()), Quat::j());
        assert_eq!(qmul(&Quat::j(), &Quat::i()), -Quat::k());
        let ijk = qmul(&qmul(&Quat::i(), &Quat::j()), &Quat::k());
        assert_eq!(ijk, -Quat::one());
    }

    #[test]
    fn conj_of_one_plus_ijk() {
        let q = Quat::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(qconj(&q), Quat::new(1.0, -1.0, -1.0, -1.0));
    }

    #[test]
    fn imag_of_self_quotient_is_zero() {
        let q = QuatExact::new(rat(1, 2), rat(-3, 1), rat(2, 7), rat(5, 1));
        let d = q.clone();
        let quotient = qmul(&d, &q.inv().unwrap());
        assert_eq!(qimag(&quotient), QuatExact::zero());
        assert_eq!(quotient, QuatExact::one());
    }

    #[test]
    fn json_is_four_array() {
        let q = Quat::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[1.0,2.0,3.0,4.0]");
        let back: Quat = serde_json::from_str("[1,2,3,4]").unwrap();
        assert_eq!(back, q);
    }
}
