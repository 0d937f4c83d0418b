use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arithmetic backend selected at the top level of configs and JSON files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Arith {
    /// Exact rationals; equality checks are exact.
    Exact,
    /// Binary floats; equality checks use a tolerance.
    #[default]
    Float,
}

/// Default float tolerance for membership tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A field usable as the real part of quaternion entries.
///
/// `f64` compares with a tolerance, [`BigRational`] ignores it and compares
/// exactly.
pub trait Scalar: Num + Clone + Debug + PartialEq + std::ops::Neg<Output = Self> {
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Zero test under the backend's notion of equality.
    fn is_negligible(&self, tol: f64) -> bool;
    fn arith() -> Arith;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn arith() -> Arith {
        Arith::Float
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn arith() -> Arith {
        Arith::Exact
    }
}

/// Rational `p/q` as a [`BigRational`].
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
