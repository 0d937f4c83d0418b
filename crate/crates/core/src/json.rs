//! JSON encodings shared by the file formats.
//!
//! A quaternion is `[re, i, j, k]`; a matrix is an array of rows. Scalars may
//! be JSON numbers or strings `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qcore::{HMat, HMatExact, Quat, QuatExact, Quaternion, Scalar};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// Exact rational from a JSON number or a `"p/q"` string.
pub fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(BigRational::from_integer(BigInt::from(i)));
            }
            parse_decimal(&n.to_string())
        }
        Value::String(s) => parse_ratio_str(s),
        _ => Err(schema(format!("expected a number, got {v}"))),
    }
}

fn parse_ratio_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| schema(format!("bad numerator in '{s}'")))?;
        let q: BigInt = q.trim().parse().map_err(|_| schema(format!("bad denominator in '{s}'")))?;
        if q == BigInt::from(0) {
            return Err(schema(format!("zero denominator in '{s}'")));
        }
        Ok(BigRational::new(p, q))
    } else {
        parse_decimal(s)
    }
}

/// Decimal (optionally with exponent) read exactly.
fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || schema(format!("not a decimal: '{s}'"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let e = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if e >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-e) as usize))
    })
}

pub fn parse_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| schema("number out of range")),
        Value::String(_) => Ok(parse_rational(v)?.to_f64()),
        _ => Err(schema(format!("expected a number, got {v}"))),
    }
}

fn parse_quat_with<T: Scalar>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Quaternion<T>> {
    let a = v.as_array().ok_or_else(|| schema("quaternion must be a 4-array"))?;
    if a.len() != 4 {
        return Err(schema(format!("quaternion must have 4 entries, got {}", a.len())));
    }
    Ok(Quaternion::new(f(&a[0])?, f(&a[1])?, f(&a[2])?, f(&a[3])?))
}

pub fn parse_quat(v: &Value) -> Result<Quat> {
    parse_quat_with(v, parse_f64)
}

pub fn parse_quat_exact(v: &Value) -> Result<QuatExact> {
    parse_quat_with(v, parse_rational)
}

fn parse_matrix_with<T: Scalar>(v: &Value, f: impl Fn(&Value) -> Result<Quaternion<T>>) -> Result<crate::qcore::HMatrix<T>> {
    let rows = v.as_array().ok_or_else(|| schema("matrix must be an array of rows"))?;
    let parsed = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| schema("matrix row must be an array"))?.iter().map(&f).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    crate::qcore::HMatrix::from_rows(parsed).map_err(|e| schema(e.to_string()))
}

pub fn parse_hmatrix(v: &Value) -> Result<HMat> {
    parse_matrix_with(v, parse_quat)
}

pub fn parse_hmatrix_exact(v: &Value) -> Result<HMatExact> {
    parse_matrix_with(v, parse_quat_exact)
}

pub fn quat_json(q: &Quat) -> Value {
    json!([q.re, q.im_i, q.im_j, q.im_k])
}

pub fn hmatrix_json(m: &HMat) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(quat_json).collect())).collect())
}

pub fn hvec_json(v: &[Quat]) -> Value {
    Value::Array(v.iter().map(quat_json).collect())
}

pub fn parse_hvec(v: &Value) -> Result<Vec<Quat>> {
    v.as_array().ok_or_else(|| schema("vector must be an array of quaternions"))?.iter().map(parse_quat).collect()
}

pub fn real_matrix_json(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect())).collect())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
