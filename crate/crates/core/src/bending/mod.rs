//! Bending deformations of surface-group representations.
//!
//! A geodesic in standard position is the set of real points of
//! `span{e₂, e₃}`; its pointwise stabilizer contains `diag(d, q, q)` for unit
//! quaternions `q, d`. An arbitrary loxodromic axis is moved to standard
//! position using the null eigenvectors of the loxodromic element.

mod closure;
mod hull;
mod infinitesimal;

pub use closure::{commutant_dim, lie_closure, log_sp, LieClosure};
pub use hull::{hull_classify, HullKind, HullReport};
pub use infinitesimal::{fd_cocycle, fd_cup_square, lamination_at, two_curve_directions, BendDirection, FdReport};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::isometry::{classify, hform, IsometryKind};
use crate::json::{parse_quat, quat_json};
use crate::linalg::null_space_abs;
use crate::qcore::complexify::{complexify, realify_vec};
use crate::qcore::{qmul, HMat, HVec, Quat};
use crate::surfrep::{SurfaceRep, Word};

/// Unit quaternions `q` (on the geodesic's plane) and `d` (on its normal).
#[derive(Debug, Clone, PartialEq)]
pub struct FixParams {
    pub q: Quat,
    pub d: Quat,
}

impl FixParams {
    pub fn new(q: Quat, d: Quat) -> Result<FixParams> {
        for x in [&q, &d] {
            let norm = x.norm();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NotUnit { norm });
            }
        }
        Ok(FixParams { q, d })
    }

    pub fn identity() -> FixParams {
        FixParams { q: Quat::one(), d: Quat::one() }
    }

    /// `q = exp(s·ξ_q)`, `d = exp(s·ξ_d)` for imaginary `ξ`.
    pub fn exp(xi_q: &Quat, xi_d: &Quat, s: f64) -> FixParams {
        FixParams { q: Quat::exp_imag(&xi_q.scale(&s)), d: Quat::exp_imag(&xi_d.scale(&s)) }
    }

    /// `Im(d q⁻¹)`; zero keeps a real representation real.
    pub fn twist(&self) -> Quat {
        qmul(&self.d, &self.q.conj()).imag()
    }
}

/// `diag(d, q, q)`: fixes the standard geodesic pointwise.
pub fn centralizer_element(p: &FixParams) -> Result<HMat> {
    let p = FixParams::new(p.q.clone(), p.d.clone())?;
    Ok(HMat::diag(vec![p.d, p.q.clone(), p.q]))
}

/// `g ∈ Sp(2,1)` whose columns `f₁, f₂, f₃` satisfy: the real span of `f₂, f₃`
/// is the axis of the loxodromic `a`, with `f₃ ± f₂` its fixed points.
pub fn axis_frame(a: &HMat) -> Result<HMat> {
    let class = classify(a)?;
    if class.kind != IsometryKind::Loxodromic {
        return Err(Error::NotLoxodromic);
    }
    let m = complexify(a).0;
    let ev = crate::isometry::eigenvalues(&m);
    let top = ev.iter().copied().max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap()).expect("nonempty");
    let bottom = ev.iter().copied().min_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap()).expect("nonempty");
    let scale = m.norm().max(1.0);
    let eigvec = |mu: Complex64| -> Result<HVec> {
        let shifted = &m - DMatrix::identity(6, 6) * mu;
        let ns = null_space_abs(&shifted, 1e-6 * scale);
        if ns.ncols() == 0 {
            return Err(Error::AxisDegenerate("no eigenvector for the extreme eigenvalue".into()));
        }
        Ok(realify_vec(&ns.column(0).iter().copied().collect::<Vec<_>>()))
    };
    let p = eigvec(top)?;
    let mut p2 = eigvec(bottom)?;
    let pp = hform(&p, &p2);
    let null_scale = vnorm(&p) * vnorm(&p2);
    if pp.norm() < 1e-9 * null_scale {
        return Err(Error::AxisDegenerate("fixed points coincide".into()));
    }
    let fix = qmul(&pp.inv().ok_or_else(|| Error::AxisDegenerate("fixed points coincide".into()))?, &Quat::real(-0.5));
    p2 = p2.iter().map(|x| qmul(x, &fix)).collect();
    let f2: HVec = p.iter().zip(&p2).map(|(x, y)| x.clone() - y.clone()).collect();
    let f3: HVec = p.iter().zip(&p2).map(|(x, y)| x.clone() + y.clone()).collect();
    let f1 = unit_normal(&f2, &f3)?;
    let mut g = HMat::zeros(3, 3);
    for i in 0..3 {
        g[(i, 0)] = f1[i].clone();
        g[(i, 1)] = f2[i].clone();
        g[(i, 2)] = f3[i].clone();
    }
    let residual = crate::qcore::hmatrix::sp_residual(&g);
    if residual > 1e-6 {
        return Err(Error::AxisDegenerate(format!("frame is not in Sp(2,1), residual {residual:e}")));
    }
    Ok(g)
}

fn vnorm(v: &[Quat]) -> f64 {
    v.iter().map(|x| x.norm_sq()).sum::<f64>().sqrt()
}

/// Positive unit vector orthogonal to `f₂` (norm 1) and `f₃` (norm -1).
fn unit_normal(f2: &[Quat], f3: &[Quat]) -> Result<HVec> {
    let mut best: Option<HVec> = None;
    for k in 0..3 {
        let mut w = vec![Quat::zero(); 3];
        w[k] = Quat::one();
        let c2 = hform(f2, &w);
        let c3 = hform(f3, &w);
        let v: HVec = (0..3).map(|i| w[i].clone() - qmul(&f2[i], &c2) + qmul(&f3[i], &c3)).collect();
        if best.as_ref().is_none_or(|b| hform(&v, &v).re > hform(b, b).re) {
            best = Some(v);
        }
    }
    let v = best.expect("three candidates");
    let n = hform(&v, &v).re;
    if n <= 1e-12 {
        return Err(Error::AxisDegenerate("no positive normal".into()));
    }
    Ok(v.iter().map(|x| x.scale(&(1.0 / n.sqrt()))).collect())
}

/// Centralizer element transported to the axis of `a`.
pub fn axis_centralizer(a: &HMat, p: &FixParams) -> Result<HMat> {
    let g = axis_frame(a)?;
    let c = centralizer_element(p)?;
    Ok(&(&g * &c) * &g.sp_inverse())
}

fn separating_word() -> Word {
    Word::parse("a1b1A1B1").expect("static word")
}

/// Bend along the axis of `ρ([a₁,b₁])`: `a₁, b₁` fixed, all other generators conjugated.
pub fn bend_amalgam(rep: &SurfaceRep, c_word: &Word, p: &FixParams) -> Result<SurfaceRep> {
    if classify_curve(c_word) != Some(CurveKind::Separating) {
        return Err(Error::DomainError(format!("'{c_word}' is not the separating commutator a1b1A1B1")));
    }
    let lam = Lamination { curves: vec![LaminationCurve { axis_word: c_word.clone(), params: p.clone() }] };
    bent_rep(rep, &lam)
}

/// Recognized curve classes for built-in crossing data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// `[a₁, b₁]`, separating the first handle.
    Separating,
    /// The curve `a₁`, crossed once by `b₁`.
    A1,
}

/// Cyclic rotations of `a1b1A1B1` and their inverses are the separating
/// curve; `a1` and `A1` the first handle's meridian.
pub fn classify_curve(w: &Word) -> Option<CurveKind> {
    let c = separating_word();
    let rotations = |x: &Word| (0..x.len()).map(|k| Word(x.0[k..].iter().chain(&x.0[..k]).copied().collect())).collect::<Vec<_>>();
    if rotations(&c).contains(w) || rotations(&c.inverse()).contains(w) {
        return Some(CurveKind::Separating);
    }
    let a1 = Word::gen(0);
    if *w == a1 || *w == a1.inverse() {
        return Some(CurveKind::A1);
    }
    None
}

impl CurveKind {
    pub fn canonical_word(self) -> Word {
        match self {
            CurveKind::Separating => separating_word(),
            CurveKind::A1 => Word::gen(0),
        }
    }

    /// Crossings `(h, sign)` of the path of generator `s`: the factor contributed is `ρ(h) C^{±1} ρ(h)⁻¹`.
    pub fn crossings(self, s: usize) -> Vec<(Word, bool)> {
        match self {
            CurveKind::Separating if s >= 2 => vec![(Word::identity(), true), (Word::gen(s), false)],
            CurveKind::A1 if s == 1 => vec![(Word::gen(1), true)],
            _ => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaminationCurve {
    pub axis_word: Word,
    pub params: FixParams,
}

/// A finite collection of disjoint weighted geodesics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lamination {
    pub curves: Vec<LaminationCurve>,
}

impl Lamination {
    /// The two-curve lamination: the separating commutator and the curve `a₁`.
    pub fn two_curve(p_sep: &FixParams, p_a1: &FixParams) -> Lamination {
        Lamination {
            curves: vec![
                LaminationCurve { axis_word: separating_word(), params: p_sep.clone() },
                LaminationCurve { axis_word: Word::gen(0), params: p_a1.clone() },
            ],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curves": self.curves.iter().map(|c| json!({
                "axis_word": c.axis_word.to_string(),
                "q": quat_json(&c.params.q),
                "d": quat_json(&c.params.d),
            })).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value) -> Result<Lamination> {
        let curves = v.get("curves").and_then(Value::as_array).ok_or_else(|| Error::Schema("missing array 'curves'".into()))?;
        let curves = curves
            .iter()
            .map(|c| {
                let w = c.get("axis_word").and_then(Value::as_str).ok_or_else(|| Error::Schema("curve needs 'axis_word'".into()))?;
                let q = parse_quat(c.get("q").ok_or_else(|| Error::Schema("curve needs 'q'".into()))?)?;
                let d = parse_quat(c.get("d").ok_or_else(|| Error::Schema("curve needs 'd'".into()))?)?;
                Ok(LaminationCurve { axis_word: Word::parse(w)?, params: FixParams::new(q, d)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Lamination { curves })
    }
}

/// Generator images `ρ_λ(s) = (∏ crossings) ρ(s)`.
fn bent_images(rep: &SurfaceRep, lam: &Lamination) -> Result<Vec<HMat>> {
    let mut factors: Vec<HMat> = vec![HMat::identity(3); rep.num_generators()];
    for curve in &lam.curves {
        let kind = classify_curve(&curve.axis_word).ok_or_else(|| Error::InconsistentCrossings(format!("no crossing data for curve '{}'", curve.axis_word)))?;
        let c = axis_centralizer(&rep.eval(&kind.canonical_word()), &curve.params)?;
        let ci = c.sp_inverse();
        for (s, f) in factors.iter_mut().enumerate() {
            for (h, plus) in kind.crossings(s) {
                let rh = rep.eval(&h);
                let mid = if plus { &c } else { &ci };
                *f = &*f * &(&(&rh * mid) * &rh.sp_inverse());
            }
        }
    }
    Ok(factors.iter().zip(&rep.images).map(|(f, m)| f * m).collect())
}

/// The bent representation; fails with `InconsistentCrossings` when the relator breaks.
/// Relator tolerance of bent representations; the output carries it as its `tol`.
pub const BENT_RELATOR_TOL: f64 = 1e-8;

pub fn bent_rep(rep: &SurfaceRep, lam: &Lamination) -> Result<SurfaceRep> {
    let images = bent_images(rep, lam)?;
    let out = SurfaceRep { images, tol: rep.tol.max(BENT_RELATOR_TOL), ..rep.clone() };
    let residual = out.relator_residual();
    if residual > BENT_RELATOR_TOL {
        return Err(Error::InconsistentCrossings(format!("relator residual {residual:e}")));
    }
    Ok(out)
}

/// `ρ_λ(γ)`.
pub fn bend_lamination(rep: &SurfaceRep, lam: &Lamination, gamma: &Word) -> Result<HMat> {
    Ok(bent_rep(rep, lam)?.eval(gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::is_in_sp;
    use crate::sample;
    use crate::surfrep::{fuchsian_so21_rep, fuchsian_su11_rep};

    #[test]
    fn centralizer_examples() {
        assert_eq!(centralizer_element(&FixParams::identity()).unwrap(), HMat::identity(3));
        let c = centralizer_element(&FixParams::new(Quat::one(), Quat::i()).unwrap()).unwrap();
        assert!(is_in_sp(&c, 2).unwrap());
        let pt = vec![Quat::zero(), Quat::real(0.6), Quat::real(1.0)];
        assert_eq!(c.mul_vec(&pt), pt);
        let normal = vec![Quat::real(0.3), Quat::zero(), Quat::zero()];
        assert_eq!(c.mul_vec(&normal)[0], Quat::i().scale(&0.3));
        let p = FixParams::new(Quat::i(), Quat::i()).unwrap();
        assert!(p.twist().norm() < 1e-15);
        assert!(matches!(FixParams::new(Quat::real(2.0), Quat::one()), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn axis_frame_diagonalizes() {
        let rep = fuchsian_so21_rep(2).unwrap();
        let a = rep.eval(&separating_word());
        let g = axis_frame(&a).unwrap();
        let t = &(&g.sp_inverse() * &a) * &g;
        assert!(t[(0, 1)].norm() < 1e-8 && t[(0, 2)].norm() < 1e-8 && t[(1, 0)].norm() < 1e-8);
        let mut r = sample::rng(1);
        let p = FixParams::new(sample::unit_quat(&mut r), sample::unit_quat(&mut r)).unwrap();
        let c = axis_centralizer(&a, &p).unwrap();
        assert!((&c * &a).dist(&(&a * &c)) < 1e-8 * a.norm());
        assert!(matches!(axis_frame(&HMat::identity(3)), Err(Error::NotLoxodromic)));
    }

    #[test]
    fn amalgam_bending_is_a_representation() {
        let rep = fuchsian_so21_rep(2).unwrap();
        let c = separating_word();
        assert!(bend_amalgam(&rep, &c, &FixParams::identity()).unwrap().images.iter().zip(&rep.images).all(|(a, b)| a.dist(b) < 1e-9));
        let mut r = sample::rng(2);
        for _ in 0..3 {
            let p = FixParams::new(sample::unit_quat(&mut r), sample::unit_quat(&mut r)).unwrap();
            let bent = bend_amalgam(&rep, &c, &p).unwrap();
            assert!(bent.relator_residual() < 1e-8);
            assert_eq!(bent.images[0], rep.images[0]);
            assert_eq!(bent.images[1], rep.images[1]);
        }
        assert!(bend_amalgam(&rep, &Word::gen(0), &FixParams::identity()).is_err());
    }

    #[test]
    fn lamination_cases() {
        let rep = fuchsian_so21_rep(2).unwrap();
        let empty = bent_rep(&rep, &Lamination::default()).unwrap();
        assert_eq!(empty.images, rep.images);
        let p1 = FixParams::new(Quat::one(), Quat::i()).unwrap();
        let p2 = FixParams::new(Quat::one(), Quat::j()).unwrap();
        let single = Lamination { curves: vec![LaminationCurve { axis_word: Word::parse("A1B1a1b1").unwrap(), params: p1.clone() }] };
        let a = bent_rep(&rep, &single).unwrap();
        let b = bend_amalgam(&rep, &separating_word(), &p1).unwrap();
        assert!(a.images.iter().zip(&b.images).all(|(x, y)| x.dist(y) < 1e-12));
        let two = bent_rep(&rep, &Lamination::two_curve(&p1, &p2)).unwrap();
        assert!(two.relator_residual() < 1e-8);
        let mut r = sample::rng(3);
        for _ in 0..5 {
            let w1 = Word((0..3).map(|_| crate::surfrep::Letter::new(r.random_range(0..4), r.random_range(0..2) == 1)).collect());
            let w2 = Word((0..3).map(|_| crate::surfrep::Letter::new(r.random_range(0..4), r.random_range(0..2) == 1)).collect());
            let lhs = bend_lamination(&rep, &Lamination::two_curve(&p1, &p2), &w1.concat(&w2)).unwrap();
            let rhs = &two.eval(&w1) * &two.eval(&w2);
            assert!(lhs.dist(&rhs) < 1e-9 * lhs.norm());
        }
    }

    #[test]
    fn unknown_curve_is_inconsistent() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let lam = Lamination { curves: vec![LaminationCurve { axis_word: Word::parse("a2b1").unwrap(), params: FixParams::identity() }] };
        assert!(matches!(bent_rep(&rep, &lam), Err(Error::InconsistentCrossings(_))));
    }

    #[test]
    fn lamination_json_round_trip() {
        let lam = Lamination::two_curve(&FixParams::new(Quat::one(), Quat::i()).unwrap(), &FixParams::new(Quat::one(), Quat::j()).unwrap());
        assert_eq!(Lamination::from_json(&lam.to_json()).unwrap(), lam);
        assert!(matches!(Lamination::from_json(&json!({"curves": [{"axis_word": "a1"}]})), Err(Error::Schema(_))));
    }

    use rand::Rng;
}
