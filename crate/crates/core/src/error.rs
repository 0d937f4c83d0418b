use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Every variant carries enough context to be rendered as a machine-readable
/// error object by the CLI (see [`Error::kind`]).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is not quaternionic (MJ != J conj(M)), residual {residual:e}")]
    NotQuaternionic { residual: f64 },

    #[error("matrix is not in Sp(2,1), residual {residual:e}")]
    NotInGroup { residual: f64 },

    #[error("parameter out of domain: {0}")]
    DomainError(String),

    #[error("quaternionic line is degenerate: {0}")]
    DegenerateLine(String),

    #[error("zero vector")]
    ZeroVector,

    #[error("matrix is not in sp(4,C)")]
    NotInSp4,

    #[error("action does not preserve W = omega-perp")]
    NotPreservingW,

    #[error("singular linear system")]
    SingularSystem,

    #[error("zero weight")]
    ZeroWeight,

    #[error("determinant is not one: {det}")]
    DetNotOne { det: f64 },

    #[error("matrix is not in SU(1,1), residual {residual:e}")]
    NotInSU11 { residual: f64 },

    #[error("matrix is not in SO(2,1), residual {residual:e}")]
    NotInSO21 { residual: f64 },

    #[error("coefficient action does not kill the relator, residual {residual:e}")]
    ActionRelatorMismatch { residual: f64 },

    #[error("cochain is not a cocycle, |d1 u| = {residual:e}")]
    NotACocycle { residual: f64 },

    #[error("quadratic form has rank {rank} < {expected}")]
    FormDegenerate { rank: usize, expected: usize },

    #[error("zero input class")]
    ZeroInput,

    #[error("order-{0} obstruction is not a coboundary modulo the subalgebra")]
    ObstructionNonzero(usize),

    #[error("formal curve fails the homomorphism equation at order {order}, residual {residual:e}")]
    NotHomomorphism { order: usize, residual: f64 },

    #[error("element is not loxodromic")]
    NotLoxodromic,

    #[error("axis could not be put in standard position: {0}")]
    AxisDegenerate(String),

    #[error("quaternion is not a unit: |q| = {norm}")]
    NotUnit { norm: f64 },

    #[error("crossing data is inconsistent: {0}")]
    InconsistentCrossings(String),

    #[error("matrix logarithm did not converge")]
    LogDivergent,

    #[error("relator residual {residual:e} exceeds tolerance {tol:e}")]
    RelatorResidual { residual: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

impl Error {
    /// Machine-readable form: `{"error": kind, "message": text}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() })
    }

    /// Stable identifier used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotQuaternionic { .. } => "NotQuaternionic",
            Error::NotInGroup { .. } => "NotInGroup",
            Error::DomainError(_) => "DomainError",
            Error::DegenerateLine(_) => "DegenerateLine",
            Error::ZeroVector => "ZeroVector",
            Error::NotInSp4 => "NotInSp4",
            Error::NotPreservingW => "NotPreservingW",
            Error::SingularSystem => "SingularSystem",
            Error::ZeroWeight => "ZeroWeight",
            Error::DetNotOne { .. } => "DetNotOne",
            Error::NotInSU11 { .. } => "NotInSU11",
            Error::NotInSO21 { .. } => "NotInSO21",
            Error::ActionRelatorMismatch { .. } => "ActionRelatorMismatch",
            Error::NotACocycle { .. } => "NotACocycle",
            Error::FormDegenerate { .. } => "FormDegenerate",
            Error::ZeroInput => "ZeroInput",
            Error::ObstructionNonzero(_) => "ObstructionNonzero",
            Error::NotHomomorphism { .. } => "NotHomomorphism",
            Error::NotLoxodromic => "NotLoxodromic",
            Error::AxisDegenerate(_) => "AxisDegenerate",
            Error::NotUnit { .. } => "NotUnit",
            Error::InconsistentCrossings(_) => "InconsistentCrossings",
            Error::LogDivergent => "LogDivergent",
            Error::RelatorResidual { .. } => "RelatorResidual",
            Error::Parse(_) => "ParseError",
            Error::Schema(_) => "SchemaError",
            Error::UnknownSuite(_) => "UnknownSuite",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
