use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::complex::{fox_jacobian, CochainComplex, Cocycle, CoefficientModule, U1_COORDS};
use crate::error::{Error, Result};
use crate::linalg::RANK_REL_TOL;
use crate::qcore::lie::trace_form;
use crate::qcore::{HMat, LieElement};
use crate::surfrep::{Presentation, SurfaceRep, Word};

/// Structure constants: column `l` of entry `k` is `[e_k, e_l]`.
fn structure() -> &'static Vec<DMatrix<f64>> {
    static S: OnceLock<Vec<DMatrix<f64>>> = OnceLock::new();
    S.get_or_init(|| {
        (0..21)
            .map(|k| {
                let ek = LieElement::basis(k);
                let mut m = DMatrix::zeros(21, 21);
                for l in 0..21 {
                    m.set_column(l, &DVector::from_row_slice(&ek.bracket(&LieElement::basis(l)).0));
                }
                m
            })
            .collect()
    })
}

/// `B(e_k, e_l) = Re tr(e_k e_l)`.
pub fn trace_gram() -> &'static DMatrix<f64> {
    static G: OnceLock<DMatrix<f64>> = OnceLock::new();
    G.get_or_init(|| {
        let basis: Vec<HMat> = (0..21).map(|k| LieElement::basis(k).to_matrix()).collect();
        DMatrix::from_fn(21, 21, |k, l| trace_form(&basis[k], &basis[l]))
    })
}

/// Lie bracket in coordinates.
pub fn bracket_coords(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let s = structure();
    let mut out = DVector::zeros(21);
    for (k, m) in s.iter().enumerate() {
        if x[k] != 0.0 {
            out += m * y * x[k];
        }
    }
    out
}

/// Evaluates the 2-cocycle `c(α,β) = P(u(α), α·u'(β))` on the fundamental
/// chain of the relator, returning a vector representing a class in
/// `V / im d1`. Inverse letters use `f(s⁻¹) = s⁻¹·P(u(s), u'(s))`.
pub fn fundamental_eval(
    module: &CoefficientModule,
    relator: &Word,
    u: &Cocycle,
    u2: &Cocycle,
    product: impl Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64>,
) -> DVector<f64> {
    let d = module.dim;
    let mut act = DMatrix::identity(d, d);
    let mut uw = DVector::zeros(d);
    let mut raw = DVector::zeros(d);
    for &l in &relator.0 {
        let x2 = u2.letter_value(module, l);
        raw += product(&uw, &(&act * x2));
        if l.inv {
            let f = &module.inverse[l.gen] * product(&u.value(l.gen), &u2.value(l.gen));
            raw += &act * f;
        }
        uw += &act * u.letter_value(module, l);
        act *= module.letter(l);
    }
    raw
}

/// Real-coefficient cup pairing `⟨u ⌣ u', [S]⟩`.
pub fn scalar_pairing(module: &CoefficientModule, relator: &Word, u: &Cocycle, u2: &Cocycle) -> f64 {
    fundamental_eval(module, relator, u, u2, |x, y| DVector::from_element(1, x[0] * y[0]))[0]
}

/// Scalar analogue of [`fundamental_eval`] for an invariant pairing `V × V → ℝ`.
pub fn fundamental_eval_scalar(module: &CoefficientModule, relator: &Word, u: &Cocycle, u2: &Cocycle, pairing: impl Fn(&DVector<f64>, &DVector<f64>) -> f64) -> f64 {
    let d = module.dim;
    let mut act = DMatrix::identity(d, d);
    let mut uw = DVector::zeros(d);
    let mut raw = 0.0;
    for &l in &relator.0 {
        raw += pairing(&uw, &(&act * u2.letter_value(module, l)));
        if l.inv {
            raw += pairing(&u.value(l.gen), &u2.value(l.gen));
        }
        uw += &act * u.letter_value(module, l);
        act *= module.letter(l);
    }
    raw
}

/// Gram matrix of the cup pairing on `h1_basis` of the trivial line.
pub fn trivial_cup_gram(pres: &Presentation) -> Result<DMatrix<f64>> {
    let module = CoefficientModule::trivial(pres, 1);
    let cc = fox_jacobian(pres, &module)?;
    let basis = cc.h1_basis();
    Ok(DMatrix::from_fn(basis.len(), basis.len(), |m, n| scalar_pairing(&module, &pres.relator, &basis[m], &basis[n])))
}

/// Gram matrix of `⟨B(u ⌣ u'), [S]⟩` on `h1_basis`, where `B` is the trace
/// form restricted to the block (the standard inner product for trivial modules).
pub fn cup_gram(cc: &CochainComplex) -> DMatrix<f64> {
    let metric = match &cc.module.coords {
        Some(c) => DMatrix::from_fn(c.len(), c.len(), |i, j| trace_gram()[(c[i], c[j])]),
        None => DMatrix::identity(cc.dim(), cc.dim()),
    };
    let basis = cc.h1_basis();
    let relator = &cc.presentation.relator;
    DMatrix::from_fn(basis.len(), basis.len(), |m, n| {
        fundamental_eval_scalar(&cc.module, relator, &basis[m], &basis[n], |x, y| x.dot(&(&metric * y)))
    })
}

/// The dual classes `a₁*`, `b₁*` of the trivial line, with `b` rescaled so that `⟨a ⌣ b, [S]⟩ = 1`.
pub fn symplectic_unit(pres: &Presentation) -> (Cocycle, Cocycle) {
    let module = CoefficientModule::trivial(pres, 1);
    let n = pres.num_generators;
    let mut a = Cocycle::zeros(1, n);
    a.data[0] = 1.0;
    let mut b = Cocycle::zeros(1, n);
    b.data[1] = 1.0;
    let e = scalar_pairing(&module, &pres.relator, &a, &b);
    (a, b.scale(1.0 / e))
}

/// A class in `H²(Γ, sp(2,1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct H2Class {
    /// Representative in `V`.
    pub raw: DVector<f64>,
    /// Orthogonal projection onto `(im d1)^⊥`.
    pub reduced: DVector<f64>,
    /// Coordinates against `H⁰` (`sp(1) ⊕ u(1)` for a Fuchsian SU(1,1) group).
    pub identified: Vec<f64>,
    /// True when `identified` uses the `(i, j, k, u(1))` coordinates.
    pub canonical: bool,
}

impl H2Class {
    pub fn norm(&self) -> f64 {
        self.reduced.norm()
    }

    pub fn identified_norm(&self) -> f64 {
        self.identified.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sp1(&self) -> Option<[f64; 3]> {
        self.canonical.then(|| [self.identified[0], self.identified[1], self.identified[2]])
    }

    pub fn u1(&self) -> Option<f64> {
        self.canonical.then(|| self.identified[3])
    }
}

/// Adjoint cohomology of a representation, with the cup-square obstruction
/// and the duality `H² ≅ (H⁰)*` given by the trace form.
#[derive(Debug, Clone)]
pub struct AdjointCohomology {
    pub complex: CochainComplex,
    pub images: Vec<HMat>,
    image_d1: DMatrix<f64>,
    h0: DMatrix<f64>,
    canonical: bool,
}

/// Overall scale of the identification: `a⊗i + b⊗j` with `⟨a⌣b,[S]⟩ = 1` maps to `2k`.
pub const IDENTIFICATION_SCALE: f64 = 0.5;

fn canonical_invariants() -> DMatrix<f64> {
    let mut z = DMatrix::zeros(21, 4);
    for k in 0..3 {
        z[(k, k)] = 1.0;
    }
    for &c in &U1_COORDS {
        z[(c, 3)] = 1.0;
    }
    z
}

impl AdjointCohomology {
    pub fn new(rep: &SurfaceRep) -> Result<Self> {
        Self::from_images(&rep.one_relator(), &rep.images)
    }

    pub fn from_images(pres: &Presentation, images: &[HMat]) -> Result<Self> {
        let module = CoefficientModule::adjoint(pres, images)?;
        let complex = fox_jacobian(pres, &module)?;
        let image_d1 = complex.image_d1();
        let z = canonical_invariants();
        let scale = complex.d0.abs().max().max(1.0);
        let canonical = complex.dims().0 == 4 && (&complex.d0 * &z).abs().max() < RANK_REL_TOL * scale;
        let h0 = if canonical { z } else { complex.h0_basis() };
        Ok(AdjointCohomology { complex, images: images.to_vec(), image_d1, h0, canonical })
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn relator(&self) -> &Word {
        &self.complex.presentation.relator
    }

    pub fn num_generators(&self) -> usize {
        self.complex.num_generators()
    }

    /// Raw representative of `[u ∪ u']` with bracket coefficients.
    pub fn cup_raw(&self, u: &Cocycle, u2: &Cocycle) -> DVector<f64> {
        fundamental_eval(&self.complex.module, self.relator(), u, u2, bracket_coords)
    }

    pub fn class_of(&self, raw: DVector<f64>) -> H2Class {
        let reduced = &raw - &self.image_d1 * (self.image_d1.transpose() * &raw);
        let g = trace_gram();
        let identified = if self.canonical {
            self.h0
                .column_iter()
                .map(|z| {
                    let zg = z.transpose() * g;
                    IDENTIFICATION_SCALE * (&zg * &raw)[0] / (&zg * z)[0]
                })
                .collect()
        } else {
            self.h0.column_iter().map(|z| (z.transpose() * g * &raw)[0]).collect()
        };
        H2Class { raw, reduced, identified, canonical: self.canonical }
    }

    pub fn check(&self, u: &Cocycle) -> Result<()> {
        self.complex.check_cocycle(u, 1e-7)
    }

    pub fn cup_square(&self, u: &Cocycle) -> Result<H2Class> {
        self.check(u)?;
        Ok(self.class_of(self.cup_raw(u, u)))
    }

    /// Symmetrized bilinear form `([u,u'] + [u',u]) / 2`.
    pub fn cup_sym(&self, u: &Cocycle, u2: &Cocycle) -> H2Class {
        self.class_of((self.cup_raw(u, u2) + self.cup_raw(u2, u)) * 0.5)
    }
}

/// One-shot `[u,u]` for the adjoint module of `rep`.
pub fn cup_square(u: &Cocycle, rep: &SurfaceRep) -> Result<H2Class> {
    AdjointCohomology::new(rep)?.cup_square(u)
}

/// Requires a cocycle with 21 coordinates.
pub fn ensure_full(u: &Cocycle) -> Result<()> {
    if u.dim != 21 {
        return Err(Error::DimensionMismatch { expected: "21 coordinates per generator".into(), got: u.dim.to_string() });
    }
    Ok(())
}
