//! Quaternions, quaternionic matrices, complexification and sp(2,1) coordinates.

pub mod complexify;
pub mod hmatrix;
pub mod lie;
pub mod quaternion;
pub mod scalar;

pub use complexify::{complexify, realify, CMatrix};
pub use hmatrix::{is_in_sp, is_in_sp_lie, HMat, HMatExact, HMatrix, HVec};
pub use lie::{Block, LieElement};
pub use quaternion::{qconj, qimag, qmul, Quat, QuatExact, Quaternion};
pub use scalar::{rat, Arith, Scalar, DEFAULT_TOL};
