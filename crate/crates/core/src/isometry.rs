//! Isometries of the quaternionic hyperbolic plane: classification,
//! parabolic normal forms, quaternionic lines and growth along a ray.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qcore::complexify::{complexify, complexify_vec, realify_vec};
use crate::qcore::hmatrix::{is_in_sp_tol, sp_residual};
use crate::qcore::{qmul, HMat, HVec, Quat, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryKind {
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Classification result. The witness lists the eigenvalues of the 6×6
/// complexification as `[re, im]`, clustered and averaged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    pub eigenvalues: Vec<[f64; 2]>,
    pub multiplicities: Vec<usize>,
    pub max_modulus: f64,
}

/// Tolerances for [`classify_with`].
#[derive(Debug, Clone, Copy)]
pub struct ClassifyTol {
    /// Membership tolerance for `A* J' A = J'`.
    pub group: f64,
    /// Band around modulus 1.
    pub modulus: f64,
    /// Eigenvalues closer than this (relative) are one cluster.
    pub cluster: f64,
    /// Singular values below this (relative to `‖A‖`) count toward eigenspace dimension.
    pub nullity: f64,
}

impl Default for ClassifyTol {
    fn default() -> Self {
        ClassifyTol { group: DEFAULT_TOL, modulus: 1e-7, cluster: 1e-4, nullity: 1e-7 }
    }
}

/// Eigenvalues of a complex square matrix from its Schur form.
///
/// The QR iteration can stall on exactly repeated eigenvalues; a fixed
/// unitary similarity is applied before retrying.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    let mut work = m.clone();
    for attempt in 0..4 {
        if let Some(s) = nalgebra::Schur::try_new(work.clone(), f64::EPSILON, 2000) {
            let t = s.unpack().1;
            return (0..n).map(|i| t[(i, i)]).collect();
        }
        let q = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(((i * 7 + j * 3 + attempt) as f64).sin(), ((i + 2 * j + 1) as f64).cos())
        })
        .qr()
        .q();
        work = q.adjoint() * &work * &q;
    }
    let t = work.schur().unpack().1;
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Group eigenvalues within `rel · max(1, |λ|)` of each other, returning
/// `(mean, multiplicity)` pairs.
pub fn cluster_eigenvalues(ev: &[Complex64], rel: f64) -> Vec<(Complex64, usize)> {
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (ev[i] - ev[j]).norm() <= rel * ev[i].norm().max(1.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[b] = a;
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += ev[i];
                g.2 += 1;
            }
            None => groups.push((r, ev[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> =
        groups.into_iter().map(|(_, s, k)| (s / k as f64, k)).collect();
    out.sort_by(|a, b| {
        (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

pub fn classify(a: &HMat) -> Result<IsometryClass> {
    classify_with(a, &ClassifyTol::default())
}

/// Elliptic / parabolic / loxodromic trichotomy for `A ∈ Sp(2,1)`.
pub fn classify_with(a: &HMat, tol: &ClassifyTol) -> Result<IsometryClass> {
    if !is_in_sp_tol(a, 2, tol.group)? {
        return Err(Error::NotInGroup { residual: sp_residual(a) });
    }
    let m = complexify(a).0;
    let clusters = cluster_eigenvalues(&eigenvalues(&m), tol.cluster);
    let max_modulus = clusters.iter().map(|c| c.0.norm()).fold(0.0, f64::max);
    let kind = if max_modulus > 1.0 + tol.modulus {
        IsometryKind::Loxodromic
    } else {
        let scale = m.norm().max(1.0);
        let diagonalizable = clusters.iter().all(|&(mu, mult)| {
            let shifted = &m - DMatrix::identity(6, 6) * mu;
            linalg::null_space_abs(&shifted, tol.nullity * scale).ncols() >= mult
        });
        if diagonalizable {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Parabolic
        }
    };
    Ok(IsometryClass {
        kind,
        eigenvalues: clusters.iter().map(|c| [c.0.re, c.0.im]).collect(),
        multiplicities: clusters.iter().map(|c| c.1).collect(),
        max_modulus,
    })
}

/// The center-of-Heisenberg parabolic `[[a, λ-a], [a-λ, 2λ-a]]` with
/// `λ = 1/a + i√(1 - 1/a²)`, a 2×2 block in Sp(1,1) fixing `(1,1)` up to `λ`.
pub fn parabolic_center_solve(a: f64) -> Result<HMat> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::DomainError(format!("a = {a} must be a finite real >= 1")));
    }
    let lambda = parabolic_lambda(a);
    let aq = Quat::real(a);
    HMat::from_rows(vec![
        vec![aq.clone(), lambda.clone() - aq.clone()],
        vec![aq.clone() - lambda.clone(), lambda.scale(&2.0) - aq],
    ])
}

fn parabolic_lambda(a: f64) -> Quat {
    let re = 1.0 / a;
    Quat::complex(re, (1.0 - re * re).max(0.0).sqrt())
}

/// Residuals of the four defining relations of a centre parabolic block
/// `[[a,b],[c,d]]` fixing `(1,1)` with multiplier `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabResiduals {
    /// `|a + b - λ|`
    pub row1: f64,
    /// `|c + d - λ|`
    pub row2: f64,
    /// `max(||a|² - |c|² - 1|, ||d|² - |b|² - 1|)`
    pub norms: f64,
    /// `|āb - c̄d|`
    pub cross: f64,
}

impl StabResiduals {
    pub fn max(&self) -> f64 {
        self.row1.max(self.row2).max(self.norms).max(self.cross)
    }
}

pub fn stab_residuals(m: &HMat, lambda: &Quat) -> StabResiduals {
    let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
    StabResiduals {
        row1: (a.clone() + b.clone() - lambda.clone()).norm(),
        row2: (c.clone() + d.clone() - lambda.clone()).norm(),
        norms: (a.norm_sq() - c.norm_sq() - 1.0).abs().max((d.norm_sq() - b.norm_sq() - 1.0).abs()),
        cross: (qmul(&a.conj(), b) - qmul(&c.conj(), d)).norm(),
    }
}

/// Residuals of [`parabolic_center_solve`]`(a)` against its own `λ`.
pub fn parabolic_center_residuals(a: f64) -> Result<StabResiduals> {
    Ok(stab_residuals(&parabolic_center_solve(a)?, &parabolic_lambda(a)))
}

/// `diag(1, M)` for a 2×2 block `M`.
pub fn embed_block(m: &HMat) -> HMat {
    let mut out = HMat::identity(3);
    out.set_block(1, 1, m);
    out
}

/// `exp` of the nilpotent element with first row `(0, x, -x)`; a parabolic
/// fixing the null vector `(0,1,1)` whose first row is `(1, x, -x)`.
pub fn heisenberg_parabolic(x: &Quat) -> HMat {
    let mut n = HMat::zeros(3, 3);
    n[(0, 1)] = x.clone();
    n[(0, 2)] = -x.clone();
    n[(1, 0)] = -x.conj();
    n[(2, 0)] = -x.conj();
    let n2 = &n * &n;
    &(&HMat::identity(3) + &n) + &n2.scale(&0.5)
}

/// `Σ conj(u_i) J'_ii v_i` on ℍ^{2,1}.
pub fn hform(u: &[Quat], v: &[Quat]) -> Quat {
    HMat::form(u, v)
}

fn vec_right(v: &[Quat], q: &Quat) -> HVec {
    v.iter().map(|x| qmul(x, q)).collect()
}

fn vec_add(u: &[Quat], v: &[Quat]) -> HVec {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

fn vec_norm(v: &[Quat]) -> f64 {
    v.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
}

fn vec_scale(v: &[Quat], s: f64) -> HVec {
    v.iter().map(|q| q.scale(&s)).collect()
}

/// A quaternionic line in ℍ^{2,1}: the right ℍ-span of two vectors on which
/// the form restricts to `diag(1, -1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QLine {
    pub span: [HVec; 2],
}

impl QLine {
    /// Normalize an arbitrary spanning pair.
    pub fn new(u: HVec, v: HVec) -> Result<QLine> {
        if u.len() != 3 || v.len() != 3 {
            return Err(Error::DimensionMismatch { expected: "vectors in H^3".into(), got: format!("{} and {}", u.len(), v.len()) });
        }
        let (nu, nv) = (vec_norm(&u), vec_norm(&v));
        if nu == 0.0 || nv == 0.0 {
            return Err(Error::DegenerateLine("zero spanning vector".into()));
        }
        let u = vec_scale(&u, 1.0 / nu);
        let v = vec_scale(&v, 1.0 / nv);
        let tol = 1e-10;
        let uu = hform(&u, &u).re;
        let vv = hform(&v, &v).re;
        let uv = hform(&u, &v);
        let det = uu * vv - uv.norm_sq();
        if det > -tol {
            let why = if det.abs() <= tol { "restricted form is degenerate" } else { "restricted form is definite" };
            return Err(Error::DegenerateLine(why.into()));
        }
        let p = if uu > tol {
            u.clone()
        } else if vv > tol {
            v.clone()
        } else if vv < -tol {
            vec_add(&u, &vec_right(&v, &uv.conj().scale(&(-1.0 / vv))))
        } else {
            let t = (1.0 - uu / uv.norm_sq()).max(1.0);
            vec_add(&u, &vec_right(&v, &uv.conj().scale(&t)))
        };
        let pp = hform(&p, &p).re;
        let e = vec_scale(&p, 1.0 / pp.sqrt());
        // the spanning vector furthest from eℍ completes the pair
        let reduce = |w: &[Quat]| -> HVec {
            let c = hform(&e, w);
            w.iter().zip(&e).map(|(wi, ei)| wi.clone() - qmul(ei, &c)).collect()
        };
        let (fu, fv) = (reduce(&u), reduce(&v));
        let f = if vec_norm(&fu) >= vec_norm(&fv) { fu } else { fv };
        let ff = hform(&f, &f).re;
        if ff >= -tol {
            return Err(Error::DegenerateLine("no negative direction".into()));
        }
        let f = vec_scale(&f, 1.0 / (-ff).sqrt());
        Ok(QLine { span: [e, f] })
    }

    /// `span{e₂, e₃}`, the line `{(0, ℍ)}`.
    pub fn standard() -> QLine {
        let z = Quat::zero();
        let o = Quat::one();
        QLine { span: [vec![z.clone(), o.clone(), z.clone()], vec![z.clone(), z, o]] }
    }

    /// Image under `g`.
    pub fn transform(&self, g: &HMat) -> Result<QLine> {
        QLine::new(g.mul_vec(&self.span[0]), g.mul_vec(&self.span[1]))
    }

    /// Orthonormal (complex) basis of the complexified ℍ-span.
    fn complex_basis(&self) -> DMatrix<Complex64> {
        let mut cols = Vec::new();
        for v in &self.span {
            cols.push(DVector::from_vec(complexify_vec(v)));
            cols.push(DVector::from_vec(complexify_vec(&vec_right(v, &Quat::j()))));
        }
        linalg_orthonormalize(&DMatrix::from_columns(&cols))
    }

    /// A positive normal vector `n` with `n ℍ = line^⊥`.
    pub fn normal(&self) -> HVec {
        let [e, f] = &self.span;
        let mut best: Option<HVec> = None;
        for k in 0..3 {
            let mut w = vec![Quat::zero(); 3];
            w[k] = Quat::one();
            let ce = hform(e, &w);
            let cf = hform(f, &w);
            let r: HVec = (0..3).map(|i| w[i].clone() - qmul(&e[i], &ce) + qmul(&f[i], &cf)).collect();
            if best.as_ref().map_or(true, |b| vec_norm(&r) > vec_norm(b)) {
                best = Some(r);
            }
        }
        let n = best.expect("three candidates");
        let nn = hform(&n, &n).re;
        vec_scale(&n, 1.0 / nn.abs().sqrt())
    }
}

fn linalg_orthonormalize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let qr = m.clone().qr();
    qr.q()
}

/// Residual of projecting `A·line` onto `line`, relative to `‖A‖`.
pub fn qline_residual(a: &HMat, line: &QLine) -> f64 {
    let basis = line.complex_basis();
    let ca = complexify(a).0;
    let mut worst: f64 = 0.0;
    for v in &line.span {
        let x = &ca * DVector::from_vec(complexify_vec(v));
        let proj = &basis * (basis.adjoint() * &x);
        worst = worst.max((&x - proj).norm());
    }
    worst / ca.norm().max(1.0)
}

pub fn stabilizes_qline_tol(a: &HMat, line: &QLine, tol: f64) -> Result<bool> {
    // re-normalizing revalidates signature for caller-built lines
    let line = QLine::new(line.span[0].clone(), line.span[1].clone())?;
    Ok(qline_residual(a, &line) < tol)
}

pub fn stabilizes_qline(a: &HMat, line: &QLine) -> Result<bool> {
    stabilizes_qline_tol(a, line, 1e-8)
}

/// Relative residual of `A n ∈ nℍ`.
fn normal_residual(a: &HMat, n: &[Quat]) -> f64 {
    let cn = DVector::from_vec(complexify_vec(n));
    let cnj = DVector::from_vec(complexify_vec(&vec_right(n, &Quat::j())));
    let basis = linalg_orthonormalize(&DMatrix::from_columns(&[cn.clone(), cnj]));
    let x = complexify(a).0 * cn;
    let proj = &basis * (basis.adjoint() * &x);
    (&x - proj).norm() / x.norm().max(1e-300)
}

/// A quaternionic line preserved by every generator, if one exists.
///
/// Tries the standard line first, then the orthogonal complements of
/// positive quaternionic eigenvectors of a fixed real combination of the
/// generators and their inverses.
pub fn invariant_qline_search(gens: &[HMat]) -> Option<QLine> {
    invariant_qline_search_tol(gens, 1e-8)
}

pub fn invariant_qline_search_tol(gens: &[HMat], tol: f64) -> Option<QLine> {
    let std = QLine::standard();
    if gens.iter().all(|g| qline_residual(g, &std) < tol) {
        return Some(std);
    }
    let mut combo = HMat::zeros(3, 3);
    for (k, g) in gens.iter().enumerate() {
        let c1 = 1.0 + 0.37 * (k as f64 + 1.0).sqrt();
        let c2 = 0.61 + 0.23 * (k as f64 * 1.7).sin();
        combo = &(&combo + &g.scale(&c1)) + &g.sp_inverse().scale(&c2);
    }
    let m = complexify(&combo).0;
    let clusters = cluster_eigenvalues(&eigenvalues(&m), 1e-6);
    let scale = m.norm().max(1.0);
    for (mu, _) in clusters {
        let shifted = &m - DMatrix::identity(6, 6) * mu;
        let ns = linalg::null_space_abs(&shifted, 1e-6 * scale);
        for c in 0..ns.ncols() {
            let col: Vec<Complex64> = ns.column(c).iter().copied().collect();
            let n = realify_vec(&col);
            let nn = hform(&n, &n).re;
            if nn <= 1e-8 * vec_norm(&n).powi(2) {
                continue;
            }
            if gens.iter().all(|g| normal_residual(g, &n) < tol.sqrt()) {
                if let Ok(line) = complement_line(&n) {
                    if gens.iter().all(|g| qline_residual(g, &line) < tol.sqrt()) {
                        return Some(line);
                    }
                }
            }
        }
    }
    None
}

/// The line `n^⊥` for a positive vector `n`.
pub fn complement_line(n: &[Quat]) -> Result<QLine> {
    let nn = hform(n, n).re;
    if nn <= 0.0 {
        return Err(Error::DegenerateLine("normal is not positive".into()));
    }
    let mut cands: Vec<HVec> = (0..3)
        .map(|k| {
            let mut w = vec![Quat::zero(); 3];
            w[k] = Quat::one();
            let c = hform(n, &w).scale(&(1.0 / nn));
            (0..3).map(|i| w[i].clone() - qmul(&n[i], &c)).collect()
        })
        .collect();
    cands.sort_by(|a, b| vec_norm(b).partial_cmp(&vec_norm(a)).unwrap());
    // the two largest projections span n^⊥ unless they are ℍ-dependent
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if let Ok(l) = QLine::new(cands[i].clone(), cands[j].clone()) {
            return Ok(l);
        }
    }
    Err(Error::DegenerateLine("could not span the complement".into()))
}

/// A point on the unit-speed ray `q₁ = δ_t q₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayPoint {
    pub t: f64,
    pub delta: f64,
}

impl RayPoint {
    pub fn new(t: f64) -> RayPoint {
        RayPoint { t, delta: (t / 2.0).tanh() }
    }

    /// `1 - δ = 2/(eᵗ+1)`, without cancellation.
    fn one_minus(&self) -> f64 {
        2.0 / (self.t.exp() + 1.0)
    }

    fn one_minus_sq(&self) -> f64 {
        self.one_minus() * (1.0 + self.delta)
    }
}

/// Both algebraic forms of the squared length of `v` at the point `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayLength {
    /// `(1+δ²)/(1-δ²)|v|² + 2δ/(1-δ²)(v₁v̄₂ + v₂v̄₁)`
    pub expanded: f64,
    /// `2δ/(1-δ²)|v₁+v₂|² + (1-δ)/(1+δ)|v|²`
    pub collected: f64,
    /// Largest summand magnitude, the natural scale for comparing the two.
    pub scale: f64,
}

pub fn ray_length_forms(v: &[Quat; 2], t: f64) -> RayLength {
    let p = RayPoint::new(t);
    let d = p.delta;
    let den = p.one_minus_sq();
    let s = v[0].norm_sq() + v[1].norm_sq();
    let cross = 2.0 * qmul(&v[0], &v[1].conj()).re;
    let sum = (v[0].clone() + v[1].clone()).norm_sq();
    let a = (1.0 + d * d) / den * s;
    let b = 2.0 * d / den * cross;
    let c = 2.0 * d / den * sum;
    let e = p.one_minus() / (1.0 + d) * s;
    RayLength { expanded: a + b, collected: c + e, scale: a.abs().max(b.abs()).max(c.abs()).max(e.abs()) }
}

/// Squared length of `v = (v₁, v₂)` at distance `t` along the ray.
pub fn ray_length_sq(v: &[Quat; 2], t: f64) -> f64 {
    ray_length_forms(v, t).collected
}

/// Growth rate of [`ray_length_sq`]: `-1` when `v₁ + v₂ = 0`, else `+1`.
pub fn decay_exponent(v: &[Quat; 2]) -> Result<f64> {
    let n = (v[0].norm_sq() + v[1].norm_sq()).sqrt();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let sum = (v[0].clone() + v[1].clone()).norm();
    Ok(if sum <= 1e-12 * n { -1.0 } else { 1.0 })
}

/// Least-squares slope of `ln ray_length_sq(v, t)` over `t ∈ [t0, t1]`.
pub fn fitted_slope(v: &[Quat; 2], t0: f64, t1: f64, samples: usize) -> f64 {
    let ts: Vec<f64> = (0..samples).map(|k| t0 + (t1 - t0) * k as f64 / (samples - 1) as f64).collect();
    let ys: Vec<f64> = ts.iter().map(|&t| ray_length_sq(v, t).ln()).collect();
    let n = samples as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(&ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    sxy / sxx
}
