//! sp(4,ℂ) → so(5,ℂ) through the action on 2-forms, in exact ℚ(i) arithmetic.
//!
//! 2-forms use the basis `dzₐ∧dz_b` ordered `12, 13, 14, 23, 24, 34`.
//! The symplectic form is `ω = dz₁∧dz₃ + dz₄∧dz₂` and `Q = [[0, S], [-S, 0]]`
//! with `S = diag(1, -1)`.
//!
//! The basis of `W = ω^⊥` is unnormalized and lives over ℚ(i): `v₁ = ω₁ - iω₄`, `v₃ = ω₁ + iω₄`, `v₂ = ω₂ - iω₅`, `v₄ = ω₂ + iω₅`,
//! `v₅ = ω₃`, with `P(v₁,v₃) = P(v₂,v₄) = 2` and `P(v₅,v₅) = 1`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Element of ℚ(i).
pub type Cq = Complex<BigRational>;

pub type CqMatrix = DMatrix<Cq>;

/// Index pairs of the 2-form basis (0-based).
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn cq(re: i64, im: i64) -> Cq {
    Complex::new(BigRational::from_integer(BigInt::from(re)), BigRational::from_integer(BigInt::from(im)))
}

fn cq_rat(r: BigRational) -> Cq {
    Complex::new(r, BigRational::zero())
}

/// A 2-form as six ℚ(i) coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm(pub [Cq; 6]);

impl TwoForm {
    pub fn zero() -> TwoForm {
        TwoForm(std::array::from_fn(|_| Cq::zero()))
    }

    /// `dzₐ∧dz_b` for 0-based `a ≠ b`, with sign when `a > b`.
    pub fn dz_wedge(a: usize, b: usize) -> TwoForm {
        let mut f = TwoForm::zero();
        if let Some((k, s)) = pair_index(a, b) {
            f.0[k] = cq(s, 0);
        }
        f
    }

    /// `α ∧ β` for one-forms given by four coefficients each.
    pub fn wedge1(alpha: &[Cq; 4], beta: &[Cq; 4]) -> TwoForm {
        let mut f = TwoForm::zero();
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            f.0[k] = alpha[a].clone() * beta[b].clone() - alpha[b].clone() * beta[a].clone();
        }
        f
    }

    pub fn add(&self, o: &TwoForm) -> TwoForm {
        TwoForm(std::array::from_fn(|k| self.0[k].clone() + o.0[k].clone()))
    }

    pub fn sub(&self, o: &TwoForm) -> TwoForm {
        TwoForm(std::array::from_fn(|k| self.0[k].clone() - o.0[k].clone()))
    }

    pub fn scale(&self, c: &Cq) -> TwoForm {
        TwoForm(std::array::from_fn(|k| self.0[k].clone() * c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    fn apply(m: &CqMatrix, f: &TwoForm) -> TwoForm {
        TwoForm(std::array::from_fn(|i| {
            (0..6).fold(Cq::zero(), |acc, k| acc + m[(i, k)].clone() * f.0[k].clone())
        }))
    }
}

/// Basis slot and sign of `dzₐ∧dz_b`.
fn pair_index(a: usize, b: usize) -> Option<(usize, i64)> {
    if a == b {
        return None;
    }
    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
    PAIRS.iter().position(|&p| p == (lo, hi)).map(|k| (k, s))
}

/// Coefficient of `dz₁∧dz₂∧dz₃∧dz₄` in `α ∧ β`.
pub fn wedge4(a: &TwoForm, b: &TwoForm) -> Cq {
    let x = &a.0;
    let y = &b.0;
    let t = |i: usize, j: usize| x[i].clone() * y[j].clone();
    t(0, 5) - t(1, 4) + t(2, 3) + t(3, 2) - t(4, 1) + t(5, 0)
}

/// `ω = dz₁∧dz₃ + dz₄∧dz₂`.
pub fn omega() -> TwoForm {
    TwoForm::dz_wedge(0, 2).add(&TwoForm::dz_wedge(3, 1))
}

/// The quadratic form `P(α, β) = (α∧β)/(ω∧ω)`.
#[allow(non_snake_case)]
pub fn wedge_quadratic_P(a: &TwoForm, b: &TwoForm) -> Cq {
    let w = omega();
    wedge4(a, b) / wedge4(&w, &w)
}

/// `ω₁ … ω₆` (index 0 holds `ω₁`).
pub fn omega_list() -> [TwoForm; 6] {
    let e = |a, b| TwoForm::dz_wedge(a, b);
    let i = cq(0, 1);
    [
        e(0, 3).sub(&e(1, 2)).scale(&i),
        e(0, 1).sub(&e(2, 3)).scale(&i),
        e(0, 2).sub(&e(3, 1)).scale(&i),
        e(0, 3).add(&e(1, 2)),
        e(0, 1).add(&e(2, 3)),
        omega(),
    ]
}

/// The unnormalized basis `v₁ … v₅` of `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct WBasis(pub [TwoForm; 5]);

impl WBasis {
    pub fn new() -> WBasis {
        let [w1, w2, w3, w4, w5, _] = omega_list();
        let i = cq(0, 1);
        WBasis([
            w1.sub(&w4.scale(&i)),
            w2.sub(&w5.scale(&i)),
            w1.add(&w4.scale(&i)),
            w2.add(&w5.scale(&i)),
            w3,
        ])
    }

    /// `P(vᵢ, vⱼ)`.
    pub fn gram(&self) -> [[Cq; 5]; 5] {
        std::array::from_fn(|i| std::array::from_fn(|j| wedge_quadratic_P(&self.0[i], &self.0[j])))
    }

    /// Coordinates of a form in `W` by P-duality; `None` if it is not in `W`.
    pub fn coordinates(&self, f: &TwoForm) -> Option<[Cq; 5]> {
        if !wedge_quadratic_P(f, &omega()).is_zero() {
            return None;
        }
        let v = &self.0;
        let half = cq_rat(BigRational::new(BigInt::one(), BigInt::from(2)));
        let c = [
            wedge_quadratic_P(f, &v[2]) * half.clone(),
            wedge_quadratic_P(f, &v[3]) * half.clone(),
            wedge_quadratic_P(f, &v[0]) * half.clone(),
            wedge_quadratic_P(f, &v[1]) * half,
            wedge_quadratic_P(f, &v[4]),
        ];
        let rebuilt = (0..5).fold(TwoForm::zero(), |acc, k| acc.add(&v[k].scale(&c[k])));
        if rebuilt == *f {
            Some(c)
        } else {
            None
        }
    }
}

impl Default for WBasis {
    fn default() -> Self {
        WBasis::new()
    }
}

/// `Q = [[0, S], [-S, 0]]`.
pub fn q_matrix() -> CqMatrix {
    let mut q = CqMatrix::from_element(4, 4, Cq::zero());
    q[(0, 2)] = cq(1, 0);
    q[(1, 3)] = cq(-1, 0);
    q[(2, 0)] = cq(-1, 0);
    q[(3, 1)] = cq(1, 0);
    q
}

fn mat_is_zero(m: &CqMatrix) -> bool {
    m.iter().all(|c| c.is_zero())
}

/// `XᵀQ + QX = 0`, equivalently the three block conditions on `[[A,B],[C,D]]`.
pub fn is_in_sp4(x: &CqMatrix) -> bool {
    if x.nrows() != 4 || x.ncols() != 4 {
        return false;
    }
    let q = q_matrix();
    mat_is_zero(&(x.transpose() * &q + &q * x))
}

/// How `X` acts on one-forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneFormSign {
    /// `X dz_k = -Σ X_kl dz_l`; a Lie algebra homomorphism.
    Dual,
    /// `X dz_k = +Σ X_kl dz_l`; reverses brackets.
    Pullback,
}

/// Derivation action of `X ∈ sp(4,ℂ)` on the 2-form basis (columns are images).
pub fn sp4_on_2forms(x: &CqMatrix) -> Result<CqMatrix> {
    if !is_in_sp4(x) {
        return Err(Error::NotInSp4);
    }
    Ok(action_on_2forms(x, OneFormSign::Dual))
}

/// The action for either sign convention, without the membership check.
pub fn action_on_2forms(x: &CqMatrix, sign: OneFormSign) -> CqMatrix {
    let s = match sign {
        OneFormSign::Dual => cq(-1, 0),
        OneFormSign::Pullback => cq(1, 0),
    };
    let mut m = CqMatrix::from_element(6, 6, Cq::zero());
    for (col, &(a, b)) in PAIRS.iter().enumerate() {
        for l in 0..4 {
            let xa = x[(a, l)].clone() * s.clone();
            if let Some((k, sg)) = pair_index(l, b) {
                m[(k, col)] = m[(k, col)].clone() + xa * cq(sg, 0);
            }
            let xb = x[(b, l)].clone() * s.clone();
            if let Some((k, sg)) = pair_index(a, l) {
                m[(k, col)] = m[(k, col)].clone() + xb * cq(sg, 0);
            }
        }
    }
    m
}

/// Matrix of a 2-form endomorphism in the `v`-basis of `W`.
#[allow(non_snake_case)]
pub fn restrict_to_W(m: &CqMatrix) -> Result<CqMatrix> {
    if !TwoForm::apply(m, &omega()).is_zero() {
        return Err(Error::NotPreservingW);
    }
    let basis = WBasis::new();
    let mut out = CqMatrix::from_element(5, 5, Cq::zero());
    for (j, v) in basis.0.iter().enumerate() {
        let image = TwoForm::apply(m, v);
        let c = basis.coordinates(&image).ok_or(Error::NotPreservingW)?;
        for (i, ci) in c.into_iter().enumerate() {
            out[(i, j)] = ci;
        }
    }
    Ok(out)
}

/// Skewness defect `P(Mv, w) + P(v, Mw)` over all pairs of the `v`-basis.
pub fn p_skew_defect(m5: &CqMatrix) -> CqMatrix {
    let g = WBasis::new().gram();
    let g = CqMatrix::from_fn(5, 5, |i, j| g[i][j].clone());
    m5.transpose() * &g + &g * m5
}

/// The composite sp(4,ℂ) → so(W, P).
pub fn sp4_to_so5(x: &CqMatrix) -> Result<CqMatrix> {
    restrict_to_W(&sp4_on_2forms(x)?)
}

pub fn diag4(d: [i64; 4]) -> CqMatrix {
    CqMatrix::from_fn(4, 4, |i, j| if i == j { cq(d[i], 0) } else { Cq::zero() })
}

/// Cartan generators `diag(1,0,-1,0)` and `diag(0,1,0,-1)` of sp(4,ℂ).
pub fn cartan_sp4() -> [CqMatrix; 2] {
    [diag4([1, 0, -1, 0]), diag4([0, 1, 0, -1])]
}

/// A weight as coefficients on `(L₁, L₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight(pub BigRational, pub BigRational);

impl Weight {
    pub fn ints(a: i64, b: i64) -> Weight {
        Weight(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
}

/// Diagonal of a 5×5 matrix as real rationals, if it is diagonal with real entries.
fn real_diagonal(m: &CqMatrix) -> Option<Vec<BigRational>> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && !m[(i, j)].is_zero() {
                return None;
            }
        }
        if !m[(i, i)].im.is_zero() {
            return None;
        }
    }
    Some((0..m.nrows()).map(|i| m[(i, i)].re.clone()).collect())
}

/// Images `h₁, h₂` of the sp(4,ℂ) Cartan generators, as diagonals in the `v`-basis.
pub fn cartan_images() -> Result<[Vec<BigRational>; 2]> {
    let [a, b] = cartan_sp4();
    let h1 = real_diagonal(&sp4_to_so5(&a)?).ok_or(Error::SingularSystem)?;
    let h2 = real_diagonal(&sp4_to_so5(&b)?).ok_or(Error::SingularSystem)?;
    Ok([h1, h2])
}

/// `(L₁', L₂')`: the sp(4,ℂ) dual basis written on the so(5,ℂ) dual basis.
///
/// With `hⱼ ↦ (xⱼ, yⱼ)` in so(5,ℂ) Cartan coordinates, `Lᵢ' = αL₁ + βL₂`
/// solves `αxⱼ + βyⱼ = δᵢⱼ`.
pub fn weight_transform() -> Result<(Weight, Weight)> {
    let [h1, h2] = cartan_images()?;
    let (x1, y1) = (h1[0].clone(), h1[1].clone());
    let (x2, y2) = (h2[0].clone(), h2[1].clone());
    let det = x1.clone() * y2.clone() - y1.clone() * x2.clone();
    if det.is_zero() {
        return Err(Error::SingularSystem);
    }
    // inverse of [[x1, y1], [x2, y2]]; column i gives (α, β) for Lᵢ'
    let l1 = Weight(y2 / det.clone(), -x2 / det.clone());
    let l2 = Weight(-y1 / det.clone(), x1 / det);
    Ok((l1, l2))
}

/// `Some(c)` with `w = c·u`, `None` if no such rational exists.
pub fn multiple_factor(w: &Weight, u: &Weight) -> Result<Option<BigRational>> {
    if u.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let c = if !u.0.is_zero() { w.0.clone() / u.0.clone() } else { w.1.clone() / u.1.clone() };
    let ok = w.0 == c.clone() * u.0.clone() && w.1 == c.clone() * u.1.clone();
    Ok(ok.then_some(c))
}

pub fn is_multiple(w: &Weight, u: &Weight) -> Result<bool> {
    Ok(multiple_factor(w, u)?.is_some())
}

/// Weights of the standard action on ℂ⁴ (eigenvalues of the Cartan on `e₁…e₄`).
pub fn standard_weights() -> Vec<Weight> {
    let [a, b] = cartan_sp4();
    (0..4).map(|k| Weight(a[(k, k)].re.clone(), b[(k, k)].re.clone())).collect()
}

/// `[X, Y]`.
pub fn bracket(x: &CqMatrix, y: &CqMatrix) -> CqMatrix {
    x * y - y * x
}

/// Random sp(4,ℂ) element `-Q·Σ` with `Σ` symmetric and small Gaussian-integer entries.
pub fn random_sp4(rng: &mut impl Rng) -> CqMatrix {
    let mut s = CqMatrix::from_element(4, 4, Cq::zero());
    for i in 0..4 {
        for j in i..4 {
            let v = cq(rng.random_range(-5..=5), rng.random_range(-5..=5));
            s[(i, j)] = v.clone();
            s[(j, i)] = v;
        }
    }
    -(q_matrix() * s)
}

/// Summary of the weight computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightsReport {
    pub h1: Vec<String>,
    pub h2: Vec<String>,
    #[serde(rename = "L1prime")]
    pub l1_prime: [[String; 2]; 2],
    #[serde(rename = "L2prime")]
    pub l2_prime: [[String; 2]; 2],
    #[serde(rename = "lemma_spin")]
    pub non_proportional: bool,
}

pub fn rat_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn num_den(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn weights_report() -> Result<WeightsReport> {
    let [h1, h2] = cartan_images()?;
    let (l1, l2) = weight_transform()?;
    let non_proportional = !is_multiple(&Weight::ints(1, 0), &l1)?;
    Ok(WeightsReport {
        h1: h1.iter().map(rat_string).collect(),
        h2: h2.iter().map(rat_string).collect(),
        l1_prime: [num_den(&l1.0), num_den(&l1.1)],
        l2_prime: [num_den(&l2.0), num_den(&l2.1)],
        non_proportional,
    })
}

/// JSON form with integer entries as numbers and `[num, den]` pairs for weights.
pub fn weights_report_json(r: &WeightsReport) -> Value {
    let ints = |v: &[String]| -> Vec<Value> {
        v.iter().map(|s| s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s.clone()))).collect()
    };
    let pair = |p: &[[String; 2]; 2]| -> Vec<Value> {
        p.iter()
            .map(|nd| json!([nd[0].parse::<i64>().unwrap_or(0), nd[1].parse::<i64>().unwrap_or(1)]))
            .collect()
    };
    json!({
        "h1": ints(&r.h1),
        "h2": ints(&r.h2),
        "L1prime": pair(&r.l1_prime),
        "L2prime": pair(&r.l2_prime),
        "lemma_spin": r.non_proportional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::scalar::rat;
    use crate::sample;

    fn one() -> Cq {
        cq(1, 0)
    }

    #[test]
    fn p_of_omega_is_one() {
        assert_eq!(wedge_quadratic_P(&omega(), &omega()), one());
        assert_eq!(wedge4(&omega(), &omega()), cq(2, 0));
    }

    #[test]
    fn w_basis_pairings() {
        let g = WBasis::new().gram();
        for i in 0..5 {
            for j in 0..5 {
                let expected = match (i, j) {
                    (0, 2) | (2, 0) | (1, 3) | (3, 1) => cq(2, 0),
                    (4, 4) => one(),
                    _ => Cq::zero(),
                };
                assert_eq!(g[i][j], expected, "P(v{}, v{})", i + 1, j + 1);
            }
        }
        for v in &WBasis::new().0 {
            assert!(wedge_quadratic_P(v, &omega()).is_zero());
        }
    }

    #[test]
    fn omegas_are_p_orthonormal() {
        let w = omega_list();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { one() } else { Cq::zero() };
                assert_eq!(wedge_quadratic_P(&w[i], &w[j]), expected);
            }
        }
    }

    #[test]
    fn wedge_of_one_forms_is_antisymmetric_and_bilinear() {
        let a: [Cq; 4] = [cq(1, 2), cq(0, -1), cq(3, 0), cq(-2, 1)];
        let b: [Cq; 4] = [cq(0, 1), cq(4, 0), cq(-1, -1), cq(2, 2)];
        let c: [Cq; 4] = [cq(5, 0), cq(1, 1), cq(0, 0), cq(-3, 2)];
        assert_eq!(TwoForm::wedge1(&a, &b), TwoForm::wedge1(&b, &a).scale(&cq(-1, 0)));
        assert!(TwoForm::wedge1(&a, &a).is_zero());
        let bc: [Cq; 4] = std::array::from_fn(|k| b[k].clone() + c[k].clone() * cq(0, 3));
        assert_eq!(
            TwoForm::wedge1(&a, &bc),
            TwoForm::wedge1(&a, &b).add(&TwoForm::wedge1(&a, &c).scale(&cq(0, 3)))
        );
    }

    #[test]
    fn zero_acts_as_zero() {
        let z = CqMatrix::from_element(4, 4, Cq::zero());
        assert!(mat_is_zero(&sp4_on_2forms(&z).unwrap()));
    }

    #[test]
    fn cartan_kills_omega_and_v5() {
        let m = sp4_on_2forms(&diag4([1, 0, -1, 0])).unwrap();
        assert!(TwoForm::apply(&m, &omega()).is_zero());
        assert!(TwoForm::apply(&m, &WBasis::new().0[4]).is_zero());
    }

    #[test]
    fn non_member_is_rejected() {
        assert_eq!(sp4_on_2forms(&diag4([1, 0, 0, 0])), Err(Error::NotInSp4));
    }

    #[test]
    fn cartan_images_match() {
        let int = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        let [h1, h2] = cartan_images().unwrap();
        assert_eq!(h1, int(&[1, 1, -1, -1, 0]));
        assert_eq!(h2, int(&[-1, 1, 1, -1, 0]));
    }

    #[test]
    fn transformed_weights() {
        let (l1, l2) = weight_transform().unwrap();
        assert_eq!(l1, Weight(rat(1, 2), rat(1, 2)));
        assert_eq!(l2, Weight(rat(-1, 2), rat(1, 2)));
    }

    #[test]
    fn multiples() {
        let half = Weight(rat(1, 2), rat(1, 2));
        assert!(!is_multiple(&Weight::ints(1, 0), &half).unwrap());
        assert_eq!(multiple_factor(&Weight::ints(1, 1), &half).unwrap(), Some(rat(2, 1)));
        assert_eq!(multiple_factor(&Weight::ints(0, 0), &half).unwrap(), Some(rat(0, 1)));
        assert_eq!(is_multiple(&half, &Weight::ints(0, 0)), Err(Error::ZeroWeight));
    }

    #[test]
    fn standard_weights_are_plus_minus_l() {
        let w = standard_weights();
        assert_eq!(w, vec![Weight::ints(1, 0), Weight::ints(0, 1), Weight::ints(-1, 0), Weight::ints(0, -1)]);
    }

    #[test]
    fn dual_action_is_a_homomorphism_and_p_skew() {
        let mut r = sample::rng(1);
        for _ in 0..5 {
            let x = random_sp4(&mut r);
            let y = random_sp4(&mut r);
            assert!(is_in_sp4(&x));
            let rx = sp4_to_so5(&x).unwrap();
            let ry = sp4_to_so5(&y).unwrap();
            let rxy = sp4_to_so5(&bracket(&x, &y)).unwrap();
            assert_eq!(rxy, bracket(&rx, &ry));
            assert!(mat_is_zero(&p_skew_defect(&rx)));
        }
    }

    #[test]
    fn pullback_sign_reverses_brackets() {
        let mut r = sample::rng(2);
        let x = random_sp4(&mut r);
        let y = random_sp4(&mut r);
        let p = |m: &CqMatrix| action_on_2forms(m, OneFormSign::Pullback);
        assert!(TwoForm::apply(&p(&x), &omega()).is_zero());
        assert_eq!(p(&bracket(&x, &y)), -bracket(&p(&x), &p(&y)));
        assert_ne!(p(&bracket(&x, &y)), bracket(&p(&x), &p(&y)));
    }

    #[test]
    fn report_json_shape() {
        let v = weights_report_json(&weights_report().unwrap());
        assert_eq!(v["h1"], json!([1, 1, -1, -1, 0]));
        assert_eq!(v["L1prime"], json!([[1, 2], [1, 2]]));
        assert_eq!(v["lemma_spin"], json!(true));
    }
}
