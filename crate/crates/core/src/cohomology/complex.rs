use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{column_space, null_space, rank, vstack};
use crate::qcore::{Block, HMat, LieElement};
use crate::surfrep::{Letter, Presentation, SurfaceRep, Word};

/// Coordinates of `W = {j·[[z,w],[-w,t]]}` inside sp(1,1).
pub const W_COORDS: [usize; 6] = [12, 13, 15, 16, 19, 20];

/// Coordinates of the centre `diag(0, i, i)` of u(1,1).
pub const U1_COORDS: [usize; 2] = [11, 14];

/// Named coefficient modules for a representation into Sp(2,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleBlock {
    All,
    Sp1,
    Sp11,
    H2,
    W,
    Trivial,
}

impl ModuleBlock {
    pub fn parse(s: &str) -> Result<ModuleBlock> {
        Ok(match s {
            "all" => ModuleBlock::All,
            "sp1" => ModuleBlock::Sp1,
            "sp11" => ModuleBlock::Sp11,
            "h2" => ModuleBlock::H2,
            "w" => ModuleBlock::W,
            "trivial" => ModuleBlock::Trivial,
            _ => return Err(Error::DomainError(format!("unknown block '{s}'"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ModuleBlock::All => "all",
            ModuleBlock::Sp1 => "sp1",
            ModuleBlock::Sp11 => "sp11",
            ModuleBlock::H2 => "h2",
            ModuleBlock::W => "w",
            ModuleBlock::Trivial => "trivial",
        }
    }

    /// Coordinates in sp(2,1); `None` for the trivial line.
    pub fn coords(self) -> Option<Vec<usize>> {
        match self {
            ModuleBlock::All => Some((0..21).collect()),
            ModuleBlock::Sp1 => Some(Block::Sp1.range().collect()),
            ModuleBlock::Sp11 => Some(Block::Sp11.range().collect()),
            ModuleBlock::H2 => Some(Block::H2.range().collect()),
            ModuleBlock::W => Some(W_COORDS.to_vec()),
            ModuleBlock::Trivial => None,
        }
    }
}

/// `Ad(g)` on the 21 coordinates.
pub fn adjoint_matrix(g: &HMat) -> DMatrix<f64> {
    let gi = g.sp_inverse();
    let mut m = DMatrix::zeros(21, 21);
    for k in 0..21 {
        let y = LieElement::project(&(&(g * &LieElement::basis(k).to_matrix()) * &gi));
        m.set_column(k, &DVector::from_row_slice(&y.0));
    }
    m
}

/// A real vector space with an action of the free group that kills the relator.
#[derive(Debug, Clone)]
pub struct CoefficientModule {
    pub dim: usize,
    pub action: Vec<DMatrix<f64>>,
    pub inverse: Vec<DMatrix<f64>>,
    /// Position of each module coordinate inside sp(2,1), for adjoint blocks.
    pub coords: Option<Vec<usize>>,
}

impl CoefficientModule {
    pub fn new(pres: &Presentation, action: Vec<DMatrix<f64>>, coords: Option<Vec<usize>>) -> Result<Self> {
        if action.len() != pres.num_generators {
            return Err(Error::DimensionMismatch { expected: format!("{} generator actions", pres.num_generators), got: action.len().to_string() });
        }
        let dim = action.first().map_or(0, |a| a.nrows());
        let inverse = action
            .iter()
            .map(|a| a.clone().try_inverse().ok_or(Error::SingularSystem))
            .collect::<Result<Vec<_>>>()?;
        let module = CoefficientModule { dim, action, inverse, coords };
        let residual = module.relator_residual(&pres.relator);
        if residual > module.relator_tol() {
            return Err(Error::ActionRelatorMismatch { residual });
        }
        Ok(module)
    }

    pub fn trivial(pres: &Presentation, dim: usize) -> Self {
        let id = DMatrix::identity(dim, dim);
        CoefficientModule { dim, action: vec![id.clone(); pres.num_generators], inverse: vec![id; pres.num_generators], coords: None }
    }

    /// `Ad∘ρ` restricted to the coordinates `coords`, which must span an invariant subspace.
    pub fn adjoint_block(pres: &Presentation, images: &[HMat], coords: &[usize]) -> Result<Self> {
        let full: Vec<DMatrix<f64>> = images.iter().map(adjoint_matrix).collect();
        let mut action = Vec::with_capacity(full.len());
        for a in &full {
            let leak = (0..21)
                .filter(|r| !coords.contains(r))
                .flat_map(|r| coords.iter().map(move |&c| (r, c)))
                .fold(0.0f64, |m, (r, c)| m.max(a[(r, c)].abs()));
            if leak > 1e-8 * a.abs().max().max(1.0) {
                return Err(Error::DomainError(format!("coefficient block is not invariant (leak {leak:e})")));
            }
            action.push(DMatrix::from_fn(coords.len(), coords.len(), |i, j| a[(coords[i], coords[j])]));
        }
        Self::new(pres, action, Some(coords.to_vec()))
    }

    pub fn adjoint(pres: &Presentation, images: &[HMat]) -> Result<Self> {
        Self::adjoint_block(pres, images, &(0..21).collect::<Vec<_>>())
    }

    pub fn for_rep(rep: &SurfaceRep, block: ModuleBlock) -> Result<Self> {
        let pres = rep.one_relator();
        match block.coords() {
            Some(c) => Self::adjoint_block(&pres, &rep.images, &c),
            None => Ok(Self::trivial(&pres, 1)),
        }
    }

    pub fn num_generators(&self) -> usize {
        self.action.len()
    }

    pub fn letter(&self, l: Letter) -> &DMatrix<f64> {
        if l.inv {
            &self.inverse[l.gen]
        } else {
            &self.action[l.gen]
        }
    }

    pub fn word_action(&self, w: &Word) -> DMatrix<f64> {
        w.0.iter().fold(DMatrix::identity(self.dim, self.dim), |acc, &l| acc * self.letter(l))
    }

    /// Rounding allowance for the relator check, growing with the size of the action.
    pub fn relator_tol(&self) -> f64 {
        let size = self.action.iter().chain(&self.inverse).map(|a| a.abs().max()).fold(1.0, f64::max);
        1e-8 * size * size
    }

    pub fn relator_residual(&self, relator: &Word) -> f64 {
        (self.word_action(relator) - DMatrix::identity(self.dim, self.dim)).abs().max()
    }
}

/// A 1-cochain: one module vector per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    pub dim: usize,
    pub data: DVector<f64>,
}

impl Cocycle {
    pub fn zeros(dim: usize, gens: usize) -> Self {
        Cocycle { dim, data: DVector::zeros(dim * gens) }
    }

    pub fn from_values(values: &[DVector<f64>]) -> Self {
        let dim = values.first().map_or(0, |v| v.len());
        let mut data = DVector::zeros(dim * values.len());
        for (s, v) in values.iter().enumerate() {
            data.rows_mut(s * dim, dim).copy_from(v);
        }
        Cocycle { dim, data }
    }

    pub fn from_lie(values: &[LieElement]) -> Self {
        Self::from_values(&values.iter().map(|x| DVector::from_row_slice(&x.0)).collect::<Vec<_>>())
    }

    pub fn num_generators(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn value(&self, s: usize) -> DVector<f64> {
        self.data.rows(s * self.dim, self.dim).into_owned()
    }

    pub fn lie_value(&self, s: usize) -> LieElement {
        LieElement::from_slice(self.value(s).as_slice())
    }

    /// Value on a letter under the left convention `u(s⁻¹) = -s⁻¹·u(s)`.
    pub fn letter_value(&self, module: &CoefficientModule, l: Letter) -> DVector<f64> {
        let v = self.value(l.gen);
        if l.inv {
            -(&module.inverse[l.gen] * v)
        } else {
            v
        }
    }

    /// `u(w)` via `u(xy) = u(x) + x·u(y)`.
    pub fn eval_word(&self, module: &CoefficientModule, w: &Word) -> DVector<f64> {
        let mut act = DMatrix::identity(self.dim, self.dim);
        let mut val = DVector::zeros(self.dim);
        for &l in &w.0 {
            val += &act * self.letter_value(module, l);
            act *= module.letter(l);
        }
        val
    }

    /// Place module coordinates at `coords` of a `full`-dimensional module.
    pub fn embed(&self, coords: &[usize], full: usize) -> Cocycle {
        let gens = self.num_generators();
        let mut out = Cocycle::zeros(full, gens);
        for s in 0..gens {
            for (i, &c) in coords.iter().enumerate() {
                out.data[s * full + c] = self.data[s * self.dim + i];
            }
        }
        out
    }

    pub fn restrict(&self, coords: &[usize]) -> Cocycle {
        let gens = self.num_generators();
        let mut out = Cocycle::zeros(coords.len(), gens);
        for s in 0..gens {
            for (i, &c) in coords.iter().enumerate() {
                out.data[s * coords.len() + i] = self.data[s * self.dim + c];
            }
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn scale(&self, s: f64) -> Cocycle {
        Cocycle { dim: self.dim, data: &self.data * s }
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        Cocycle { dim: self.dim, data: &self.data + &other.data }
    }
}

/// `C⁰ → C¹ → C²` for a one-relator presentation.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub presentation: Presentation,
    pub module: CoefficientModule,
    /// `(n·dim) × dim`, `d0(v)(s) = v - s·v`.
    pub d0: DMatrix<f64>,
    /// `dim × (n·dim)`, the Fox Jacobian of the relator.
    pub d1: DMatrix<f64>,
}

/// Fox derivatives `∂r/∂s` evaluated in the module, as blocks of one row.
pub fn fox_matrix(module: &CoefficientModule, relator: &Word) -> DMatrix<f64> {
    let d = module.dim;
    let mut out = DMatrix::zeros(d, d * module.num_generators());
    let mut act = DMatrix::identity(d, d);
    for &l in &relator.0 {
        let next = &act * module.letter(l);
        let mut block = out.view_mut((0, l.gen * d), (d, d));
        if l.inv {
            block -= &next;
        } else {
            block += &act;
        }
        act = next;
    }
    out
}

pub fn fox_jacobian(pres: &Presentation, module: &CoefficientModule) -> Result<CochainComplex> {
    let residual = module.relator_residual(&pres.relator);
    if residual > module.relator_tol() {
        return Err(Error::ActionRelatorMismatch { residual });
    }
    let d = module.dim;
    let id = DMatrix::<f64>::identity(d, d);
    let d0 = vstack(&module.action.iter().map(|a| &id - a).collect::<Vec<_>>());
    let d1 = fox_matrix(module, &pres.relator);
    Ok(CochainComplex { presentation: pres.clone(), module: module.clone(), d0, d1 })
}

impl CochainComplex {
    pub fn for_rep(rep: &SurfaceRep, block: ModuleBlock) -> Result<Self> {
        fox_jacobian(&rep.one_relator(), &CoefficientModule::for_rep(rep, block)?)
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }

    pub fn num_generators(&self) -> usize {
        self.presentation.num_generators
    }

    pub fn rank_d0(&self) -> usize {
        rank(&self.d0)
    }

    pub fn rank_d1(&self) -> usize {
        rank(&self.d1)
    }

    /// `(h⁰, h¹, h²)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        let (r0, r1) = (self.rank_d0(), self.rank_d1());
        let d = self.dim();
        (d - r0, self.num_generators() * d - r0 - r1, d - r1)
    }

    pub fn euler(&self) -> i64 {
        let (a, b, c) = self.dims();
        a as i64 - b as i64 + c as i64
    }

    pub fn d1_d0_residual(&self) -> f64 {
        (&self.d1 * &self.d0).abs().max()
    }

    pub fn coboundary(&self, v: &DVector<f64>) -> Cocycle {
        Cocycle { dim: self.dim(), data: &self.d0 * v }
    }

    pub fn d1_norm(&self, u: &Cocycle) -> f64 {
        (&self.d1 * &u.data).norm()
    }

    pub fn check_cocycle(&self, u: &Cocycle, tol: f64) -> Result<()> {
        if u.dim != self.dim() || u.data.len() != self.d1.ncols() {
            return Err(Error::DimensionMismatch { expected: format!("{} coordinates", self.d1.ncols()), got: u.data.len().to_string() });
        }
        let residual = self.d1_norm(u);
        if residual > tol * u.norm().max(1.0) {
            return Err(Error::NotACocycle { residual });
        }
        Ok(())
    }

    /// Orthonormal basis of `ker d0`.
    pub fn h0_basis(&self) -> DMatrix<f64> {
        null_space(&self.d0)
    }

    /// Orthonormal basis of `ker d1 ∩ (im d0)^⊥`.
    pub fn h1_basis(&self) -> Vec<Cocycle> {
        let stacked = vstack(&[self.d1.clone(), self.d0.transpose()]);
        let ns = null_space(&stacked);
        ns.column_iter().map(|c| Cocycle { dim: self.dim(), data: c.into_owned() }).collect()
    }

    /// Component of `u` orthogonal to the coboundaries.
    pub fn harmonic_part(&self, u: &Cocycle) -> Cocycle {
        let b = column_space(&self.d0);
        let p = &b * (b.transpose() * &u.data);
        Cocycle { dim: u.dim, data: &u.data - p }
    }

    /// Orthonormal basis of `im d1`.
    pub fn image_d1(&self) -> DMatrix<f64> {
        column_space(&self.d1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfrep::{fuchsian_so21_rep, fuchsian_su11_rep};

    #[test]
    fn trivial_coefficients() {
        let pres = Presentation::surface(2).unwrap();
        let cc = fox_jacobian(&pres, &CoefficientModule::trivial(&pres, 1)).unwrap();
        assert_eq!(cc.d0.abs().max(), 0.0);
        assert_eq!(cc.d1.abs().max(), 0.0);
        assert_eq!(cc.dims(), (1, 4, 1));
        assert_eq!(cc.h1_basis().len(), 4);
    }

    #[test]
    fn fuchsian_block_dimensions() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let expect = [(ModuleBlock::All, (4, 50, 4)), (ModuleBlock::Sp1, (3, 12, 3)), (ModuleBlock::Sp11, (1, 22, 1)), (ModuleBlock::H2, (0, 16, 0)), (ModuleBlock::W, (0, 12, 0))];
        for (block, dims) in expect {
            let cc = CochainComplex::for_rep(&rep, block).unwrap();
            assert_eq!(cc.dims(), dims, "{}", block.name());
            assert_eq!(cc.euler(), -2 * cc.dim() as i64);
            assert!(cc.d1_d0_residual() < 1e-10);
        }
    }

    #[test]
    fn h1_basis_is_cocycles_orthogonal_to_coboundaries() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let cc = CochainComplex::for_rep(&rep, ModuleBlock::H2).unwrap();
        let basis = cc.h1_basis();
        assert_eq!(basis.len(), 16);
        for u in &basis {
            assert!(cc.d1_norm(u) < 1e-9);
            assert!((cc.d0.transpose() * &u.data).norm() < 1e-9);
        }
    }

    #[test]
    fn cocycle_evaluates_relator_to_zero() {
        let rep = fuchsian_so21_rep(2).unwrap();
        let cc = CochainComplex::for_rep(&rep, ModuleBlock::All).unwrap();
        let relator = cc.presentation.relator.clone();
        for u in cc.h1_basis().iter().take(5) {
            let scale = cc.d1.abs().max();
            assert!(u.eval_word(&cc.module, &relator).norm() < 1e-9 * scale);
            let w = Word::parse("a1b2A2").unwrap();
            let split = u.eval_word(&cc.module, &Word::parse("a1").unwrap()) + cc.module.word_action(&Word::parse("a1").unwrap()) * u.eval_word(&cc.module, &Word::parse("b2A2").unwrap());
            let direct = u.eval_word(&cc.module, &w);
            assert!((&direct - split).norm() < 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn non_invariant_block_rejected() {
        let rep = fuchsian_so21_rep(2).unwrap();
        assert!(matches!(CochainComplex::for_rep(&rep, ModuleBlock::Sp11), Err(Error::DomainError(_))));
    }

    #[test]
    fn relator_mismatch() {
        let pres = Presentation::cyclic(5);
        let m = DMatrix::from_row_slice(1, 1, &[2.0]);
        assert!(matches!(CoefficientModule::new(&pres, vec![m], None), Err(Error::ActionRelatorMismatch { .. })));
    }

    #[test]
    fn coboundary_evaluation() {
        let rep = fuchsian_su11_rep(2).unwrap();
        let cc = CochainComplex::for_rep(&rep, ModuleBlock::All).unwrap();
        let v = DVector::from_fn(21, |i, _| (i as f64 * 0.37).sin());
        let u = cc.coboundary(&v);
        let w = Word::parse("a1b1B2").unwrap();
        let expect = &v - cc.module.word_action(&w) * &v;
        assert!((u.eval_word(&cc.module, &w) - expect).norm() < 1e-10);
        assert!(cc.harmonic_part(&u).norm() < 1e-9);
    }
}
