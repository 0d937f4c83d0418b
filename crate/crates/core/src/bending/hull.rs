use serde_json::{json, Value};

use super::closure::{commutant_dim, lie_closure};
use crate::error::Result;
use crate::isometry::{invariant_qline_search, QLine};
use crate::json::hvec_json;
use crate::surfrep::SurfaceRep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullKind {
    /// Closure conjugate to so(2,1).
    Real,
    /// Closure conjugate to su(2,1).
    Complex,
    /// All of sp(2,1).
    Full,
    LineStabilizing,
    Other(usize),
}

impl HullKind {
    pub fn name(&self) -> String {
        match self {
            HullKind::Real => "REAL".into(),
            HullKind::Complex => "COMPLEX".into(),
            HullKind::Full => "FULL".into(),
            HullKind::LineStabilizing => "LINE_STABILIZING".into(),
            HullKind::Other(d) => format!("OTHER({d})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HullReport {
    pub closure_dim: usize,
    pub hull_kind: HullKind,
    pub commutant_dim: usize,
    pub invariant_line: Option<QLine>,
}

impl HullReport {
    pub fn to_json(&self) -> Value {
        json!({
            "closure_dim": self.closure_dim,
            "hull_kind": self.hull_kind.name(),
            "commutant_dim": self.commutant_dim,
            "invariant_line": self.invariant_line.as_ref().map(|l| json!({ "span": [hvec_json(&l.span[0]), hvec_json(&l.span[1])] })),
        })
    }
}

/// Combine closure dimension, commutant dimension and the invariant-line search.
pub fn hull_classify(rep: &SurfaceRep) -> Result<HullReport> {
    let closure_dim = lie_closure(&rep.images)?.dim;
    let commutant_dim = commutant_dim(&rep.images);
    let invariant_line = if closure_dim == 21 { None } else { invariant_qline_search(&rep.images) };
    let hull_kind = match (closure_dim, &invariant_line) {
        (21, _) => HullKind::Full,
        (_, Some(_)) => HullKind::LineStabilizing,
        (3, None) if commutant_dim >= 4 => HullKind::Real,
        (8, None) if commutant_dim >= 2 => HullKind::Complex,
        (d, None) => HullKind::Other(d),
    };
    Ok(HullReport { closure_dim, hull_kind, commutant_dim, invariant_line })
}
