use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::complex::{fox_jacobian, Cocycle, CoefficientModule, W_COORDS};
use super::cup::{ensure_full, symplectic_unit, AdjointCohomology, H2Class};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::qcore::{Block, HMat, Quat};

/// Pointwise symplectic form on `W`: `2 Im(z̄z' + t̄t' - 2w̄w')` for `(z, w, t)`.
pub fn w_pairing(x: [Complex64; 3], y: [Complex64; 3]) -> f64 {
    let s = x[0].conj() * y[0] + x[2].conj() * y[2] - 2.0 * x[1].conj() * y[1];
    2.0 * s.im
}

/// `j·[[z, w], [-w, t]]` placed in the sp(1,1) block.
pub fn w_matrix(x: [Complex64; 3]) -> HMat {
    let jq = |c: Complex64| Quat::j() * Quat::complex(c.re, c.im);
    let mut m = HMat::zeros(3, 3);
    m[(1, 1)] = jq(x[0]);
    m[(1, 2)] = jq(x[1]);
    m[(2, 1)] = -jq(x[1]);
    m[(2, 2)] = jq(x[2]);
    m
}

/// Quadratic form `u ↦ [u,u]_{u(1)}` on `H¹(Γ, W)`.
#[derive(Debug, Clone)]
pub struct Sp11Form {
    /// Basis of `H¹(Γ, W)`, embedded in sp(2,1) coordinates.
    pub basis: Vec<Cocycle>,
    pub gram: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl Sp11Form {
    pub fn rank(&self) -> usize {
        rank(&self.gram)
    }

    pub fn has_both_signs(&self) -> bool {
        self.eigenvalues.iter().any(|&l| l > 0.0) && self.eigenvalues.iter().any(|&l| l < 0.0)
    }

    pub fn combine(&self, coeffs: &DVector<f64>) -> Cocycle {
        self.basis.iter().zip(coeffs.iter()).fold(Cocycle::zeros(21, self.basis[0].num_generators()), |acc, (b, &c)| acc.add(&b.scale(c)))
    }
}

/// Output of the flexibility construction.
#[derive(Debug, Clone)]
pub struct FlexResult {
    pub x: Cocycle,
    pub v: Cocycle,
    pub w: Cocycle,
    pub cup_u: H2Class,
    pub cup_x: H2Class,
    /// Norm of the ℍ²-block class of `x` modulo coboundaries.
    pub h2_component: f64,
}

impl AdjointCohomology {
    fn require_canonical(&self) -> Result<()> {
        if !self.is_canonical() {
            return Err(Error::DomainError("representation does not have H⁰ = sp(1) ⊕ u(1)".into()));
        }
        Ok(())
    }

    /// `v` with `[v,v]` identified as `target ∈ sp(1)`, built as `a⊗q + b⊗q'` with `[q,q'] = target`.
    pub fn solve_sp1_square(&self, target: [f64; 3]) -> Result<Cocycle> {
        self.require_canonical()?;
        let n = self.num_generators();
        for a in &self.complex.module.action {
            let block = a.view((0, 0), (21, 3));
            let id = DMatrix::<f64>::identity(21, 3);
            if (block - id).abs().max() > 1e-9 {
                return Err(Error::DomainError("sp(1) coefficients are not trivial".into()));
            }
        }
        let t = nalgebra::Vector3::from(target);
        let norm = t.norm();
        if norm == 0.0 {
            return Ok(Cocycle::zeros(21, n));
        }
        let dir = t / norm;
        let seed = if dir.x.abs() < 0.9 { nalgebra::Vector3::x() } else { nalgebra::Vector3::y() };
        let e1 = (seed - dir * dir.dot(&seed)).normalize();
        let e2 = dir.cross(&e1);
        let s = (norm / 2.0).sqrt();
        let (q, q2) = (e1 * s, e2 * s);
        let (a, b) = symplectic_unit(&self.complex.presentation);
        let values: Vec<DVector<f64>> = (0..n)
            .map(|g| {
                let mut v = DVector::zeros(21);
                for k in 0..3 {
                    v[k] = a.data[g] * q[k] + b.data[g] * q2[k];
                }
                v
            })
            .collect();
        Ok(Cocycle::from_values(&values))
    }

    pub fn sp11_form(&self) -> Result<Sp11Form> {
        self.require_canonical()?;
        let module = CoefficientModule::adjoint_block(&self.complex.presentation, &self.images, &W_COORDS)?;
        let cc = fox_jacobian(&self.complex.presentation, &module)?;
        let basis: Vec<Cocycle> = cc.h1_basis().iter().map(|b| b.embed(&W_COORDS, 21)).collect();
        let m = basis.len();
        let mut gram = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = self.cup_sym(&basis[i], &basis[j]).identified[3];
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(gram.clone());
        let form = Sp11Form { basis, gram, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors };
        let r = form.rank();
        if r < m {
            return Err(Error::FormDegenerate { rank: r, expected: m });
        }
        Ok(form)
    }

    /// `w ∈ H¹(Γ, W)` with `[w,w]_{u(1)} = target`.
    pub fn solve_sp11_square(&self, target: f64) -> Result<Cocycle> {
        let form = self.sp11_form()?;
        self.solve_sp11_with(&form, target)
    }

    pub fn solve_sp11_with(&self, form: &Sp11Form, target: f64) -> Result<Cocycle> {
        if target == 0.0 {
            return Ok(Cocycle::zeros(21, self.num_generators()));
        }
        let best = form
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l * target > 0.0)
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .ok_or(Error::FormDegenerate { rank: form.rank(), expected: form.basis.len() })?;
        let c = (target / best.1).sqrt();
        Ok(form.combine(&(form.eigenvectors.column(best.0) * c)))
    }

    /// `x = u + v + w` with `[x,x] = 0` in `H²`, for `u` an ℍ²-block cocycle (8 coordinates per generator).
    pub fn flex_deform(&self, u: &Cocycle) -> Result<FlexResult> {
        let form = self.sp11_form()?;
        self.flex_deform_with(&form, u)
    }

    pub fn flex_deform_with(&self, form: &Sp11Form, u: &Cocycle) -> Result<FlexResult> {
        let h2: Vec<usize> = Block::H2.range().collect();
        let module = CoefficientModule::adjoint_block(&self.complex.presentation, &self.images, &h2)?;
        let cc = fox_jacobian(&self.complex.presentation, &module)?;
        cc.check_cocycle(u, 1e-7)?;
        if cc.harmonic_part(u).norm() <= 1e-9 * u.norm().max(1.0) {
            return Err(Error::ZeroInput);
        }
        let u_full = u.embed(&h2, 21);
        let cup_u = self.cup_square(&u_full)?;
        let s = cup_u.sp1().expect("canonical");
        let v = self.solve_sp1_square([-s[0], -s[1], -s[2]])?;
        let w = self.solve_sp11_with(form, -cup_u.u1().expect("canonical"))?;
        let x = u_full.add(&v).add(&w);
        let cup_x = self.cup_square(&x)?;
        let h2_component = cc.harmonic_part(&x.restrict(&h2)).norm();
        Ok(FlexResult { x, v, w, cup_u, cup_x, h2_component })
    }
}

/// Checks that `u` has 21 coordinates and returns its ℍ²-block part.
pub fn h2_part(u: &Cocycle) -> Result<Cocycle> {
    ensure_full(u)?;
    Ok(u.restrict(&Block::H2.range().collect::<Vec<_>>()))
}
