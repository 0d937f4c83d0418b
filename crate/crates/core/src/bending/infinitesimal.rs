use crate::cohomology::{AdjointCohomology, Cocycle, H2Class};
use crate::error::Result;
use crate::qcore::{HMat, LieElement, Quat};
use crate::surfrep::{SurfaceRep, Word};

use super::{bent_rep, FixParams, Lamination, LaminationCurve};

/// Infinitesimal weight on one curve: `q = exp(t ξ_q)`, `d = exp(t ξ_d)`.
#[derive(Debug, Clone)]
pub struct BendDirection {
    pub axis_word: Word,
    pub xi_q: Quat,
    pub xi_d: Quat,
}

pub fn lamination_at(dirs: &[BendDirection], t: f64) -> Lamination {
    Lamination {
        curves: dirs
            .iter()
            .map(|d| LaminationCurve { axis_word: d.axis_word.clone(), params: FixParams::exp(&d.xi_q, &d.xi_d, t) })
            .collect(),
    }
}

/// `u_ε(s) = (ρ_ε(s) ρ(s)⁻¹ − I)/ε`, projected onto sp(2,1).
pub fn fd_cocycle(rep: &SurfaceRep, dirs: &[BendDirection], eps: f64) -> Result<Cocycle> {
    let bent = bent_rep(rep, &lamination_at(dirs, eps))?;
    let id = HMat::identity(3);
    let values: Vec<LieElement> = bent
        .images
        .iter()
        .zip(&rep.images)
        .map(|(b, r)| LieElement::project(&(&(b * &r.sp_inverse()) - &id).scale(&(1.0 / eps))))
        .collect();
    Ok(Cocycle::from_lie(&values))
}

#[derive(Debug, Clone)]
pub struct FdReport {
    pub eps: f64,
    /// `‖d₁ u_ε‖ / ‖u_ε‖`.
    pub cocycle_defect: f64,
    pub cup: H2Class,
}

/// Cup square of the finite-difference cocycle; `u_ε` is a cocycle only to first order, so no cocycle check is applied.
pub fn fd_cup_square(rep: &SurfaceRep, dirs: &[BendDirection], eps: f64) -> Result<FdReport> {
    let u = fd_cocycle(rep, dirs, eps)?;
    let coh = AdjointCohomology::new(rep)?;
    let cocycle_defect = coh.complex.d1_norm(&u) / u.norm().max(1e-300);
    let cup = coh.class_of(coh.cup_raw(&u, &u));
    Ok(FdReport { eps, cocycle_defect, cup })
}

/// Directions of the two-curve lamination with `ξ_q = 0`.
pub fn two_curve_directions(xi_sep: Quat, xi_a1: Quat) -> Vec<BendDirection> {
    let lam = Lamination::two_curve(&FixParams::identity(), &FixParams::identity());
    let xs = [xi_sep, xi_a1];
    lam.curves
        .into_iter()
        .zip(xs)
        .map(|(c, xi_d)| BendDirection { axis_word: c.axis_word, xi_q: Quat::zero(), xi_d })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfrep::fuchsian_so21_rep;

    #[test]
    fn bending_cocycles_are_unobstructed() {
        let rep = fuchsian_so21_rep(2).unwrap();
        let dirs = two_curve_directions(Quat::i(), Quat::j());
        let coarse = fd_cup_square(&rep, &dirs, 1e-3).unwrap();
        let fine = fd_cup_square(&rep, &dirs, 1e-4).unwrap();
        assert!(fine.cup.norm() < 1e-5);
        assert!(fine.cocycle_defect < 0.2 * coarse.cocycle_defect);
    }

    #[test]
    fn generic_class_is_obstructed() {
        let rep = fuchsian_so21_rep(2).unwrap();
        let coh = AdjointCohomology::new(&rep).unwrap();
        let basis = coh.complex.h1_basis();
        let mut r = crate::sample::rng(11);
        let u = basis.iter().fold(Cocycle::zeros(21, 4), |acc, b| acc.add(&b.scale(rand::Rng::random_range(&mut r, -1.0..1.0))));
        assert!(coh.cup_square(&u).unwrap().norm() > 1e-3 * u.norm() * u.norm());
    }
}
