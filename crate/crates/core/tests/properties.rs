use num_traits::Zero;
use proptest::prelude::*;

use qrigid::bending::{bent_rep, hull_classify, FixParams, Lamination};
use qrigid::cohomology::{AdjointCohomology, CochainComplex, ModuleBlock};
use qrigid::isometry::{classify, parabolic_center_solve, ray_length_forms, stabilizes_qline, QLine};
use qrigid::qcore::complexify::{complexify, realify};
use qrigid::qcore::hmatrix::{is_in_sp_tol, sp_residual};
use qrigid::qcore::{qconj, qmul, HMat, LieElement, Quat};
use qrigid::sample;
use qrigid::surfrep::{fuchsian_so21_rep, fuchsian_su11_rep};
use qrigid::weights::{p_skew_defect, random_sp4, restrict_to_W, sp4_on_2forms};

fn quat() -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(|c| Quat::new(c[0], c[1], c[2], c[3]))
}

fn unit() -> impl Strategy<Value = Quat> {
    quat().prop_filter("nonzero", |q| q.norm() > 1e-2).prop_map(|q| q.scale(&(1.0 / q.norm())))
}

fn lie(scale: f64) -> impl Strategy<Value = LieElement> {
    prop::array::uniform21(-scale..scale).prop_map(LieElement)
}

fn group(scale: f64) -> impl Strategy<Value = HMat> {
    lie(scale).prop_map(|x| x.to_matrix().exp())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_reverses_products(p in quat(), q in quat()) {
        let lhs = qconj(&qmul(&p, &q));
        let rhs = qmul(&qconj(&q), &qconj(&p));
        prop_assert!((lhs - rhs).norm() < 1e-12);
        let n = qmul(&q, &qconj(&q));
        prop_assert!(n.imag().norm() < 1e-12 && n.re >= 0.0);
    }

    #[test]
    fn adjoint_reverses_products(a in group(0.4), b in group(0.4)) {
        prop_assert!((&a * &b).adjoint().dist(&(&b.adjoint() * &a.adjoint())) < 1e-10);
    }

    #[test]
    fn group_closed_under_product_and_inverse(a in group(0.5), b in group(0.5)) {
        prop_assert!(is_in_sp_tol(&(&a * &b), 2, 1e-8).unwrap());
        prop_assert!((&a * &a.sp_inverse()).dist(&HMat::identity(3)) < 1e-10);
        prop_assert!(sp_residual(&a.sp_inverse()) < 1e-9);
    }

    #[test]
    fn complexify_is_multiplicative_and_invertible(a in group(0.5), b in group(0.5)) {
        let (ca, cb, cab) = (complexify(&a).0, complexify(&b).0, complexify(&(&a * &b)).0);
        prop_assert!((cab - ca * cb).norm() < 1e-10);
        prop_assert!(realify(&complexify(&a)).unwrap().dist(&a) < 1e-12);
    }

    #[test]
    fn decomposition_sums_and_blocks_commute(x in lie(1.0)) {
        let (s, h, w) = x.decompose();
        prop_assert!(((s + h + w) - x).max_abs() < 1e-14);
        prop_assert!(s.bracket(&w).max_abs() < 1e-12);
        let sh = s.bracket(&h);
        let wh = w.bracket(&h);
        for k in (0..3).chain(11..21) {
            prop_assert!(sh.0[k].abs() < 1e-12 && wh.0[k].abs() < 1e-12);
        }
    }

    #[test]
    fn classification_is_conjugation_invariant(x in lie(1.0), g in group(0.3)) {
        let a = x.to_matrix().exp();
        let b = &(&g * &a) * &g.sp_inverse();
        prop_assert_eq!(classify(&a).unwrap().kind, classify(&b).unwrap().kind);
    }

    #[test]
    fn line_stabilization_is_equivariant(g in group(0.3), q in unit()) {
        let line = QLine::standard();
        let a = HMat::diag(vec![Quat::one(), q.clone(), q]);
        let moved = line.transform(&g).unwrap();
        let conj = &(&g * &a) * &g.sp_inverse();
        prop_assert_eq!(stabilizes_qline(&a, &line).unwrap(), stabilizes_qline(&conj, &moved).unwrap());
    }

    #[test]
    fn ray_length_forms_agree(v0 in quat(), v1 in quat(), t in 0.0f64..12.0) {
        let f = ray_length_forms(&[v0, v1], t);
        prop_assert!((f.expanded - f.collected).abs() <= 1e-10 * f.scale.max(1.0));
    }

    #[test]
    fn centre_parabolic_is_in_sp11(a in 1.0f64..10.0) {
        prop_assert!(is_in_sp_tol(&parabolic_center_solve(a).unwrap(), 1, 1e-10).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sp4_acts_skew_on_w(seed in any::<u64>()) {
        let x = random_sp4(&mut sample::rng(seed));
        let m5 = restrict_to_W(&sp4_on_2forms(&x).unwrap()).unwrap();
        prop_assert!(p_skew_defect(&m5).iter().all(|c| c.re.is_zero() && c.im.is_zero()));
    }

    #[test]
    fn coboundaries_have_zero_cup(seed in any::<u64>()) {
        let rep = fuchsian_su11_rep(2).unwrap();
        let coh = AdjointCohomology::new(&rep).unwrap();
        let cc = CochainComplex::for_rep(&rep, ModuleBlock::All).unwrap();
        let v = nalgebra::DVector::from_vec(sample::vec_f64(&mut sample::rng(seed), 21));
        let b = cc.coboundary(&v);
        prop_assert!(coh.cup_square(&b).unwrap().norm() < 1e-8 * b.norm().powi(2).max(1.0));
    }

    #[test]
    fn bending_keeps_the_relator(q1 in unit(), d1 in unit(), q2 in unit(), d2 in unit()) {
        let rep = fuchsian_so21_rep(2).unwrap();
        let lam = Lamination::two_curve(&FixParams::new(q1, d1).unwrap(), &FixParams::new(q2, d2).unwrap());
        prop_assert!(bent_rep(&rep, &lam).unwrap().relator_residual() < 1e-8);
    }

    #[test]
    fn hull_kind_is_conjugation_invariant(g in group(0.25)) {
        let rep = fuchsian_so21_rep(2).unwrap();
        let p = FixParams::new(Quat::one(), Quat::i()).unwrap();
        let bent = bent_rep(&rep, &Lamination::two_curve(&p, &FixParams::identity())).unwrap();
        prop_assert_eq!(hull_classify(&bent).unwrap().hull_kind, hull_classify(&bent.conjugate(&g)).unwrap().hull_kind);
    }
}
