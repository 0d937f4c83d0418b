//! Browser bindings: each export returns a JSON string for the page to render.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qrigid::bending::{bent_rep, hull_classify, FixParams, Lamination};
use qrigid::isometry::{classify, decay_exponent, embed_block, fitted_slope, parabolic_center_residuals, parabolic_center_solve, ray_length_sq};
use qrigid::json::hmatrix_json;
use qrigid::qcore::Quat;
use qrigid::surfrep::fuchsian_so21_rep;
use qrigid::{Error, Result};

fn quat_from(c: &[f64]) -> Result<Quat> {
    match c {
        [a, b, c, d] => Ok(Quat::new(*a, *b, *c, *d)),
        _ => Err(Error::Schema(format!("a quaternion needs 4 components, got {}", c.len()))),
    }
}

fn unit_from(c: &[f64]) -> Result<Quat> {
    let q = quat_from(c)?;
    let n = q.norm();
    if n < 1e-12 {
        return Err(Error::ZeroVector);
    }
    Ok(q.scale(&(1.0 / n)))
}

fn render(r: Result<Value>) -> String {
    r.unwrap_or_else(|e| e.to_json()).to_string()
}

pub fn parabolic_form_value(a: f64) -> Result<Value> {
    let m = parabolic_center_solve(a)?;
    let res = parabolic_center_residuals(a)?;
    Ok(json!({
        "a": a,
        "matrix": hmatrix_json(&m),
        "residuals": serde_json::to_value(res).expect("plain struct"),
        "class": serde_json::to_value(classify(&embed_block(&m))?).expect("plain struct"),
    }))
}

pub fn ray_length_curve_value(v1: &[f64], v2: &[f64], t_max: f64, samples: usize) -> Result<Value> {
    let v = [quat_from(v1)?, quat_from(v2)?];
    if samples < 2 || !(t_max > 0.0) {
        return Err(Error::DomainError("need at least 2 samples and t_max > 0".into()));
    }
    let points: Vec<[f64; 2]> = (0..samples)
        .map(|k| {
            let t = t_max * k as f64 / (samples - 1) as f64;
            [t, ray_length_sq(&v, t).ln()]
        })
        .collect();
    Ok(json!({
        "points": points,
        "decay_exponent": decay_exponent(&v)?,
        "fitted_slope": fitted_slope(&v, t_max / 2.0, t_max, samples.max(3)),
    }))
}

pub fn bending_ladder_value(d_sep: &[f64], d_a1: &[f64]) -> Result<Value> {
    let rep = fuchsian_so21_rep(2)?;
    let id = FixParams::identity();
    let p1 = FixParams::new(Quat::one(), unit_from(d_sep)?)?;
    let p2 = FixParams::new(Quat::one(), unit_from(d_a1)?)?;
    let steps = [("unbent", Lamination::two_curve(&id, &id)), ("separating curve", Lamination::two_curve(&p1, &id)), ("both curves", Lamination::two_curve(&p1, &p2))];
    let mut out = Vec::new();
    for (name, lam) in steps {
        let bent = bent_rep(&rep, &lam)?;
        out.push(json!({
            "step": name,
            "relator_residual": bent.relator_residual(),
            "hull": hull_classify(&bent)?.to_json(),
        }));
    }
    Ok(Value::Array(out))
}

/// Centre-of-Heisenberg parabolic for `a ≥ 1`, its constraint residuals and class.
#[wasm_bindgen]
pub fn parabolic_form(a: f64) -> String {
    render(parabolic_form_value(a))
}

/// Samples of `ln |v|²_t` along the ray, with the predicted and fitted growth rates.
#[wasm_bindgen]
pub fn ray_length_curve(v1: &[f64], v2: &[f64], t_max: f64, samples: usize) -> String {
    render(ray_length_curve_value(v1, v2, t_max, samples))
}

/// Hull reports of the genus-2 SO(2,1) group bent with `d` weights on two curves.
#[wasm_bindgen]
pub fn bending_ladder(d_sep: &[f64], d_a1: &[f64]) -> String {
    render(bending_ladder_value(d_sep, d_a1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabolic_at_two() {
        let v: Value = serde_json::from_str(&parabolic_form(2.0)).unwrap();
        assert_eq!(v["class"]["kind"], "Parabolic");
        assert!(v["residuals"]["row1"].as_f64().unwrap() < 1e-12);
        let e: Value = serde_json::from_str(&parabolic_form(0.5)).unwrap();
        assert_eq!(e["error"], "DomainError");
    }

    #[test]
    fn ray_curve_rates() {
        let v: Value = serde_json::from_str(&ray_length_curve(&[1.0, 0.0, 0.0, 0.0], &[-1.0, 0.0, 0.0, 0.0], 10.0, 21)).unwrap();
        assert_eq!(v["decay_exponent"], -1.0);
        assert_eq!(v["points"].as_array().unwrap().len(), 21);
        let v: Value = serde_json::from_str(&ray_length_curve(&[1.0, 0.2, 0.0, 0.0], &[0.3, 0.0, 0.0, 0.5], 20.0, 41)).unwrap();
        assert!((v["fitted_slope"].as_f64().unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn ladder_reaches_full() {
        let v: Value = serde_json::from_str(&bending_ladder(&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0])).unwrap();
        let kinds: Vec<&str> = v.as_array().unwrap().iter().map(|s| s["hull"]["hull_kind"].as_str().unwrap()).collect();
        assert_eq!(kinds, ["REAL", "COMPLEX", "FULL"]);
        let e: Value = serde_json::from_str(&bending_ladder(&[0.0; 4], &[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(e["error"], "ZeroVector");
    }
}
