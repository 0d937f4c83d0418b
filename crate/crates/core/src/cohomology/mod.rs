//! Group cohomology of one-relator groups with coefficients in sp(2,1).
//!
//! Cocycles follow the left convention `u(γγ') = u(γ) + γ·u(γ')`, so
//! `d0(v)(s) = v - s·v` and `d1` is the Fox Jacobian of the relator.

mod complex;
mod cup;
mod solvers;
mod weil;

pub use complex::{adjoint_matrix, fox_jacobian, fox_matrix, CochainComplex, Cocycle, CoefficientModule, ModuleBlock, U1_COORDS, W_COORDS};
pub use cup::{
    bracket_coords, cup_gram, cup_square, fundamental_eval, fundamental_eval_scalar, scalar_pairing, symplectic_unit, trace_gram, trivial_cup_gram, AdjointCohomology, H2Class,
    IDENTIFICATION_SCALE,
};
pub use solvers::{h2_part, w_matrix, w_pairing, FlexResult, Sp11Form};
pub use weil::{cyclic_round_trip_data, formal_curve, relator_defect, series_exp, series_log, series_mul, weil_normalize, Series, WeilResult};
