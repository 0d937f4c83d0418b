use rand::Rng;
use serde_json::json;

use super::{attempt, Check};
use crate::bending::{bend_amalgam, bend_lamination, bent_rep, centralizer_element, fd_cup_square, hull_classify, lie_closure, two_curve_directions, FixParams, HullKind, Lamination, LaminationCurve};
use crate::cohomology::{trivial_cup_gram, AdjointCohomology, CochainComplex, Cocycle, ModuleBlock, cyclic_round_trip_data, weil_normalize};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::isometry::{classify, decay_exponent, embed_block, fitted_slope, parabolic_center_residuals, parabolic_center_solve, ray_length_forms, QLine};
use crate::linalg::rank;
use crate::qcore::complexify::{complexify, realify, CMatrix};
use crate::qcore::{is_in_sp_lie, qconj, qimag, qmul, rat, Arith, Block, HMat, HMatExact, HMatrix, LieElement, Quat, QuatExact, Scalar};
use crate::sample;
use crate::surfrep::{fuchsian_so21_rep, fuchsian_su11_rep, Presentation, Word};
use crate::weights::{weights_report, weights_report_json};

pub fn run_one(name: &str, cfg: &Config) -> Result<Vec<Check>> {
    Ok(match name {
        "qcore" => qcore(cfg),
        "stab" => stab(cfg),
        "weights" => weights(),
        "metric" => metric(cfg),
        "cohomology" => cohomology(),
        "sp1" => sp1(cfg),
        "sp11" => sp11(),
        "flex" => flex(cfg),
        "weil" => weil(cfg),
        "bending" => bending(cfg),
        "hull" => hull(cfg),
        other => return Err(Error::UnknownSuite(other.into())),
    })
}

fn qcore(cfg: &Config) -> Vec<Check> {
    let mut out = vec![
        Check::flag("qmul_ij_k", qmul(&Quat::i(), &Quat::j()) == Quat::k()),
        Check::flag("qconj", qconj(&Quat::new(1.0, 1.0, 1.0, 1.0)) == Quat::new(1.0, -1.0, -1.0, -1.0)),
        Check::flag("qimag_unit_ratio", {
            let q = Quat::new(0.6, 0.0, 0.8, 0.0);
            qimag(&qmul(&q, &q.inv().expect("unit"))).norm() < 1e-15
        }),
    ];
    out.extend(membership_examples(cfg));
    out.push(Check::flag("lie_sp1_diagonal", is_in_sp_lie(&HMat::diag(vec![Quat::i(), Quat::zero(), Quat::zero()]), 2).unwrap_or(false)));
    out.push(Check::flag("lie_real_diagonal_rejected", !is_in_sp_lie(&HMat::diag(vec![Quat::one(), Quat::zero(), Quat::zero()]), 2).unwrap_or(true)));

    let mut r = sample::rng(cfg.seed);
    let (mut closure, mut decomp, mut commute, mut mult) = (0f64, 0f64, 0f64, 0f64);
    for _ in 0..20 {
        let (a, b) = (sample::sp21(&mut r, 0.5), sample::sp21(&mut r, 0.5));
        let ab = &a * &b;
        closure = closure.max(crate::qcore::hmatrix::sp_residual(&ab)).max((&a * &a.sp_inverse()).dist(&HMat::identity(3)));
        let x = sample::lie(&mut r, 1.0);
        let (s, h, w) = x.decompose();
        decomp = decomp.max(((s + h + w) - x).max_abs());
        commute = commute.max(s.to_matrix().bracket(&w.to_matrix()).max_abs());
        mult = mult.max((complexify(&ab).0 - complexify(&a).0 * complexify(&b).0).norm());
    }
    out.push(Check::lt("group_closure_residual", closure, 100.0 * cfg.tol));
    out.push(Check::lt("decompose_sum_residual", decomp, 1e-12));
    out.push(Check::lt("sp1_sp11_bracket", commute, 1e-12));
    out.push(Check::lt("complexify_multiplicative", mult, 1e-12));
    out.push(Check::flag("complexify_j", {
        let c = complexify(&HMat::diag(vec![Quat::j()])).0;
        let want = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]).map(|x| num_complex::Complex64::new(x, 0.0));
        (c - want).norm() == 0.0
    }));
    out.push(Check::flag("j_squared_minus_identity", {
        let j = CMatrix::j(2).0;
        (&j * &j + nalgebra::DMatrix::identity(4, 4)).norm() == 0.0
    }));
    out.push(attempt("realify_round_trip", || {
        let a = sample::sp21(&mut r, 0.5);
        Ok(Check::lt("realify_round_trip", realify(&complexify(&a))?.dist(&a), 1e-12))
    }));
    out.push(Check::equals(
        "realify_rejects_diag12",
        json!(realify(&CMatrix(nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]).map(|x| num_complex::Complex64::new(x, 0.0))))).map(|_| "ok").unwrap_or_else(|e| e.kind())),
        json!("NotQuaternionic"),
    ));
    out
}

fn membership_examples(cfg: &Config) -> Vec<Check> {
    match cfg.arith {
        Arith::Exact => {
            let q = |a: i64, b: i64, c: i64, d: i64, den: i64| QuatExact::new(rat(a, den), rat(b, den), rat(c, den), rat(d, den));
            let one = q(1, 0, 0, 0, 1);
            let id = HMatExact::identity(3);
            let unit = HMatExact::diag(vec![q(0, 3, 4, 0, 5), one.clone(), one.clone()]);
            let two = HMatExact::diag(vec![q(2, 0, 0, 0, 1), one.clone(), one]);
            vec![
                Check::flag("sp_identity", is_in_sp_tol_any(&id, 2, 0.0)),
                Check::flag("sp_unit_diagonal", is_in_sp_tol_any(&unit, 2, 0.0)),
                Check::flag("sp_diag2_rejected", !is_in_sp_tol_any(&two, 2, 0.0)),
            ]
        }
        Arith::Float => {
            let mut r = sample::rng(cfg.seed ^ 1);
            let unit = HMat::diag(vec![sample::unit_quat(&mut r), Quat::one(), Quat::one()]);
            let two = HMat::diag(vec![Quat::real(2.0), Quat::one(), Quat::one()]);
            vec![
                Check::flag("sp_identity", is_in_sp_tol_any(&HMat::identity(3), 2, cfg.tol)),
                Check::flag("sp_unit_diagonal", is_in_sp_tol_any(&unit, 2, cfg.tol)),
                Check::flag("sp_diag2_rejected", !is_in_sp_tol_any(&two, 2, cfg.tol)),
            ]
        }
    }
}

/// Hand-derived entries of the `a = 2` centre parabolic.
pub fn parabolic_two_expected() -> HMat {
    let s = 3f64.sqrt();
    HMat::from_rows(vec![
        vec![Quat::real(2.0), Quat::complex(-1.5, s / 2.0)],
        vec![Quat::complex(1.5, -s / 2.0), Quat::complex(-1.0, s)],
    ])
    .expect("2x2")
}

fn stab(cfg: &Config) -> Vec<Check> {
    let mut out = vec![attempt("a2_matches_stored", || {
        Ok(Check::lt("a2_matches_stored", parabolic_center_solve(2.0)?.dist(&parabolic_two_expected()), 1e-12))
    })];
    out.push(attempt("a2_constraints", || Ok(Check::lt("a2_constraints", parabolic_center_residuals(2.0)?.max(), 1e-12))));
    out.push(attempt("random_a_constraints", || {
        let mut r = sample::rng(cfg.seed);
        let mut worst = 0f64;
        let mut member = true;
        for _ in 0..100 {
            let a = r.random_range(1.0..=10.0);
            worst = worst.max(parabolic_center_residuals(a)?.max());
            member &= is_in_sp_tol_any(&parabolic_center_solve(a)?, 1, cfg.tol);
        }
        Ok(Check { pass: worst < 1e-12 && member, ..Check::lt("random_a_constraints", worst, 1e-12) })
    }));
    out.push(attempt("embedded_parabolic_kind", || {
        let kind = classify(&embed_block(&parabolic_center_solve(3.0)?))?.kind;
        Ok(Check::equals("embedded_parabolic_kind", json!(format!("{kind:?}")), json!("Parabolic")))
    }));
    out.push(Check::equals("domain_error_below_one", json!(parabolic_center_solve(0.5).map(|_| "ok").unwrap_or_else(|e| e.kind())), json!("DomainError")));
    out
}

fn weights() -> Vec<Check> {
    let expected = json!({
        "h1": [1, 1, -1, -1, 0],
        "h2": [-1, 1, 1, -1, 0],
        "L1prime": [[1, 2], [1, 2]],
        "L2prime": [[-1, 2], [1, 2]],
        "lemma_spin": true,
    });
    match weights_report() {
        Err(e) => vec![Check::failed("weight_transform", &e)],
        Ok(r) => {
            let got = weights_report_json(&r);
            ["h1", "h2", "L1prime", "L2prime"]
                .iter()
                .map(|k| Check::equals(k, got[k].clone(), expected[k].clone()))
                .chain(std::iter::once(Check::flag("lemma_spin", r.non_proportional)))
                .collect()
        }
    }
}

fn metric(cfg: &Config) -> Vec<Check> {
    let mut r = sample::rng(cfg.seed);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let v = [sample::quat(&mut r), sample::quat(&mut r)];
        let t = r.random_range(0.0..=10.0);
        let f = ray_length_forms(&v, t);
        worst = worst.max((f.expanded - f.collected).abs() / f.scale.max(1.0));
    }
    let q = sample::quat(&mut r);
    let generic = [sample::quat(&mut r), sample::quat(&mut r)];
    vec![
        Check::lt("forms_agree", worst, 1e-10),
        attempt("decay_antidiagonal", || Ok(Check::equals("decay_antidiagonal", json!(decay_exponent(&[q.clone(), -q.clone()])?), json!(-1.0)))),
        Check::lt("generic_slope", (fitted_slope(&generic, 10.0, 20.0, 41) - 1.0).abs(), 0.05),
        Check::equals("zero_vector", json!(decay_exponent(&[Quat::zero(), Quat::zero()]).map(|_| "ok").unwrap_or_else(|e| e.kind())), json!("ZeroVector")),
    ]
}

/// Dimensions `(h⁰, h¹, h²)` expected for the genus-2 SU(1,1) representation.
pub const EXPECTED_DIMS: [(ModuleBlock, (usize, usize, usize)); 4] =
    [(ModuleBlock::All, (4, 50, 4)), (ModuleBlock::Sp1, (3, 12, 3)), (ModuleBlock::Sp11, (1, 22, 1)), (ModuleBlock::H2, (0, 16, 0))];

fn cohomology() -> Vec<Check> {
    let mut out = Vec::new();
    let rep = match fuchsian_su11_rep(2) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("rep", &e)],
    };
    for (block, dims) in EXPECTED_DIMS {
        let id = format!("dims_{}", block.name());
        out.push(attempt(&id, || {
            let cc = CochainComplex::for_rep(&rep, block)?;
            let d = cc.dims();
            Ok(Check::equals(&id, json!([d.0, d.1, d.2]), json!([dims.0, dims.1, dims.2])))
        }));
        let id = format!("euler_{}", block.name());
        out.push(attempt(&id, || {
            let cc = CochainComplex::for_rep(&rep, block)?;
            Ok(Check::equals(&id, json!(cc.euler()), json!(-2 * cc.dim() as i64)))
        }));
    }
    out.push(attempt("trivial_pairing", || {
        let gram = trivial_cup_gram(&Presentation::surface(2)?)?;
        let skew = (&gram + gram.transpose()).abs().max();
        let r = rank(&gram);
        Ok(Check { pass: r == 4 && skew < 1e-12, ..Check::equals("trivial_pairing", json!({"rank": r, "antisymmetry": skew}), json!({"rank": 4, "antisymmetry": 0.0})) })
    }));
    out
}

fn su11_cohomology() -> Result<AdjointCohomology> {
    AdjointCohomology::new(&fuchsian_su11_rep(2)?)
}

fn sp1(cfg: &Config) -> Vec<Check> {
    vec![attempt("random_targets", || {
        let coh = su11_cohomology()?;
        let mut r = sample::rng(cfg.seed);
        let mut worst = 0f64;
        for _ in 0..20 {
            let t = [sample::sym(&mut r), sample::sym(&mut r), sample::sym(&mut r)];
            let v = coh.solve_sp1_square(t)?;
            let id = coh.cup_square(&v)?.identified;
            let miss = (0..3).map(|k| (id[k] - t[k]).abs()).fold(id[3].abs(), f64::max);
            worst = worst.max(miss);
        }
        Ok(Check::lt("random_targets", worst, 1e-8))
    })]
}

fn sp11() -> Vec<Check> {
    match su11_cohomology().and_then(|c| c.sp11_form().map(|f| (c, f))) {
        Err(e) => vec![Check::failed("form", &e)],
        Ok((coh, form)) => {
            let mut out = vec![
                Check::equals("form_rank", json!(form.rank()), json!(form.basis.len())),
                Check::equals("h1_dim", json!(form.basis.len()), json!(12)),
                Check::flag("both_signs", form.has_both_signs()),
            ];
            for (i, t) in [-1.0, 0.5].into_iter().enumerate() {
                let id = format!("target_{i}");
                out.push(attempt(&id, || {
                    let w = coh.solve_sp11_with(&form, t)?;
                    Ok(Check::lt(&id, (coh.cup_square(&w)?.identified[3] - t).abs(), 1e-8))
                }));
            }
            out
        }
    }
}

fn flex(cfg: &Config) -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let rep = fuchsian_su11_rep(2)?;
        let coh = AdjointCohomology::new(&rep)?;
        let form = coh.sp11_form()?;
        let basis = CochainComplex::for_rep(&rep, ModuleBlock::H2)?.h1_basis();
        let mut r = sample::rng(cfg.seed);
        let mut out = Vec::new();
        for i in 0..5 {
            let u = basis.iter().fold(Cocycle::zeros(8, 4), |acc, b| acc.add(&b.scale(sample::sym(&mut r))));
            let res = coh.flex_deform_with(&form, &u)?;
            out.push(Check::lt(&format!("cup_x_{i}"), res.cup_x.norm(), 1e-8));
            out.push(Check::gt(&format!("h2_component_{i}"), res.h2_component, 1e-6));
        }
        out.push(Check::equals("zero_input", json!(coh.flex_deform_with(&form, &Cocycle::zeros(8, 4)).map(|_| "ok").unwrap_or_else(|e| e.kind())), json!("ZeroInput")));
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Check::failed("flex", &e)])
}

fn h_coords() -> Vec<usize> {
    Block::Sp1.range().chain(Block::Sp11.range()).collect()
}

fn weil(cfg: &Config) -> Vec<Check> {
    let mut r = sample::rng(cfg.seed);
    let mut h2 = || {
        let mut x = sample::lie(&mut r, 0.5);
        for k in h_coords() {
            x.0[k] = 0.0;
        }
        x
    };
    let w = vec![h2(), h2()];
    vec![
        attempt("cyclic_round_trip", || {
            let (images, coeffs, h) = cyclic_round_trip_data(&w);
            let res = weil_normalize(&Presentation::cyclic(5), &images, &coeffs, &h_coords(), 1e-9)?;
            let conj = res.conjugator().iter().zip(&h).map(|(a, b)| a.dist(b)).fold(0.0, f64::max);
            let v = res.v.iter().zip(&w).map(|(a, b)| (*a - *b).max_abs()).fold(0.0, f64::max);
            Ok(Check::lt("cyclic_round_trip", conj.max(v).max(res.residual), 1e-10))
        }),
        attempt("surface_obstruction", || {
            let rep = fuchsian_su11_rep(2)?;
            let cc = CochainComplex::for_rep(&rep, ModuleBlock::H2)?;
            let u = cc.h1_basis()[0].embed(&Block::H2.range().collect::<Vec<_>>(), 21);
            let a1: Vec<LieElement> = (0..4).map(|s| u.lie_value(s)).collect();
            let got = match weil_normalize(&rep.one_relator(), &rep.images, &[a1], &h_coords(), 1e-9) {
                Err(Error::ObstructionNonzero(j)) => json!({"ObstructionNonzero": j}),
                Err(e) => e.to_json(),
                Ok(_) => json!("normalized"),
            };
            Ok(Check::equals("surface_obstruction", got, json!({"ObstructionNonzero": 1})))
        }),
    ]
}

/// `(q, d)` weights of the bending ladder: none, the separating curve, both curves.
pub fn ladder_laminations() -> [Lamination; 3] {
    let id = FixParams::identity();
    let p1 = FixParams { q: Quat::one(), d: Quat::i() };
    let p2 = FixParams { q: Quat::one(), d: Quat::j() };
    [Lamination::two_curve(&id, &id), Lamination::two_curve(&p1, &id), Lamination::two_curve(&p1, &p2)]
}

fn random_word(r: &mut impl Rng, gens: usize, len: usize) -> Word {
    Word((0..len).map(|_| crate::surfrep::Letter::new(r.random_range(0..gens), r.random_bool(0.5))).collect())
}

fn bending(cfg: &Config) -> Vec<Check> {
    let rep = match fuchsian_so21_rep(2) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("rep", &e)],
    };
    let mut r = sample::rng(cfg.seed);
    let p = FixParams { q: sample::unit_quat(&mut r), d: sample::unit_quat(&mut r) };
    let [_, _, two] = ladder_laminations();
    let mut out = vec![
        attempt("centralizer_identity", || Ok(Check::lt("centralizer_identity", centralizer_element(&FixParams::identity())?.dist(&HMat::identity(3)), 1e-15))),
        attempt("centralizer_fixes_geodesic", || {
            let c = centralizer_element(&p)?;
            let mut worst = crate::qcore::hmatrix::sp_residual(&c);
            for _ in 0..5 {
                let v = vec![Quat::zero(), Quat::real(sample::sym(&mut r)), Quat::real(sample::sym(&mut r))];
                let moved: Vec<Quat> = c.mul_vec(&v);
                worst = worst.max(moved.iter().zip(&v).map(|(a, b)| (a.clone() - qmul(b, &p.q)).norm()).fold(0.0, f64::max));
            }
            Ok(Check::lt("centralizer_fixes_geodesic", worst, 1e-12))
        }),
        attempt("amalgam_relator", || {
            let b = bend_amalgam(&rep, &Word::parse("a1b1A1B1")?, &p)?;
            Ok(Check::lt("amalgam_relator", b.relator_residual(), 1e-8))
        }),
        attempt("identity_params_unchanged", || {
            let b = bend_amalgam(&rep, &Word::parse("a1b1A1B1")?, &FixParams::identity())?;
            Ok(Check::lt("identity_params_unchanged", b.images.iter().zip(&rep.images).map(|(x, y)| x.dist(y)).fold(0.0, f64::max), 1e-12))
        }),
        attempt("two_curve_relator", || Ok(Check::lt("two_curve_relator", bent_rep(&rep, &two)?.relator_residual(), 1e-8))),
        attempt("single_curve_matches_amalgam", || {
            let lam = Lamination { curves: vec![LaminationCurve { axis_word: Word::parse("a1b1A1B1")?, params: p.clone() }] };
            let a = bent_rep(&rep, &lam)?;
            let b = bend_amalgam(&rep, &Word::parse("a1b1A1B1")?, &p)?;
            Ok(Check::lt("single_curve_matches_amalgam", a.images.iter().zip(&b.images).map(|(x, y)| x.dist(y)).fold(0.0, f64::max), 1e-12))
        }),
        attempt("equivariance", || {
            let bent = bent_rep(&rep, &two)?;
            let mut worst = 0f64;
            for _ in 0..10 {
                let (w1, w2) = (random_word(&mut r, 4, 4), random_word(&mut r, 4, 4));
                let lhs = bend_lamination(&rep, &two, &w1.concat(&w2))?;
                let rhs = &bent.eval(&w1) * &bent.eval(&w2);
                worst = worst.max(lhs.dist(&rhs) / lhs.norm());
            }
            Ok(Check::lt("equivariance", worst, 1e-10))
        }),
        attempt("fd_cup_square", || {
            let rep = fuchsian_so21_rep(2)?;
            let f = fd_cup_square(&rep, &two_curve_directions(Quat::i(), Quat::j()), 1e-4)?;
            Ok(Check::lt("fd_cup_square", f.cup.norm(), 1e-5))
        }),
    ];
    let ladder: Vec<usize> = ladder_laminations().iter().filter_map(|l| bent_rep(&rep, l).ok().and_then(|b| lie_closure(&b.images).ok()).map(|c| c.dim)).collect();
    out.push(Check::equals("closure_ladder", json!(ladder), json!([3, 8, 21])));
    out
}

fn hull(cfg: &Config) -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let so = fuchsian_so21_rep(2)?;
        let su = hull_classify(&fuchsian_su11_rep(2)?)?;
        let mut out = vec![
            Check::equals("su11_kind", json!(su.hull_kind.name()), json!("LINE_STABILIZING")),
            Check::flag("su11_standard_line", su.invariant_line == Some(QLine::standard())),
        ];
        let mut kinds = Vec::new();
        for lam in ladder_laminations() {
            kinds.push(hull_classify(&bent_rep(&so, &lam)?)?);
        }
        out.push(Check::equals("ladder_kinds", json!(kinds.iter().map(|k| k.hull_kind.name()).collect::<Vec<_>>()), json!(["REAL", "COMPLEX", "FULL"])));
        out.push(Check::gt("real_commutant", kinds[0].commutant_dim as f64, 3.5));
        out.push(Check::flag("full_no_line", kinds[2].invariant_line.is_none()));
        let g = sample::sp21(&mut sample::rng(cfg.seed), 0.3);
        let conj = hull_classify(&bent_rep(&so, &ladder_laminations()[1])?.conjugate(&g))?;
        out.push(Check::flag("conjugation_invariant", conj.hull_kind == HullKind::Complex));
        let twist = FixParams { q: Quat::i(), d: Quat::i() };
        let real = hull_classify(&bent_rep(&so, &Lamination::two_curve(&twist, &FixParams::identity()))?)?;
        out.push(Check::flag("zero_twist_stays_real", real.hull_kind == HullKind::Real));
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Check::failed("hull", &e)])
}

fn is_in_sp_tol_any<T: Scalar>(a: &HMatrix<T>, n: usize, tol: f64) -> bool {
    crate::qcore::hmatrix::is_in_sp_tol(a, n, tol).unwrap_or(false)
}
