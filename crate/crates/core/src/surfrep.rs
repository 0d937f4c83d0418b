//! Closed-surface groups, Fuchsian generators and their embeddings in Sp(2,1).
//!
//! Generators are `a₁, b₁, …, a_g, b_g` with `aᵢ` at index `2(i-1)` and `bᵢ`
//! at `2(i-1)+1`. The relator is `∏ [aᵢ, bᵢ]` with `[a, b] = a b a⁻¹ b⁻¹`.
//! Words are written as strings such as `"a1b1A1B1"`: lowercase letters are
//! generators and uppercase letters their inverses.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::json::{hmatrix_json, parse_f64, parse_hmatrix, parse_hmatrix_exact};
use crate::qcore::hmatrix::{is_in_sp_tol, sp_residual};
use crate::qcore::{Arith, HMat, Quat, DEFAULT_TOL};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Letter {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn identity() -> Word {
        Word(vec![])
    }

    pub fn gen(g: usize) -> Word {
        Word(vec![Letter::new(g, false)])
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parse `"a1b1A1B1"`.
    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let (base, inv) = match c {
                'a' | 'b' => (c, false),
                'A' | 'B' => (c.to_ascii_lowercase(), true),
                _ => return Err(Error::Parse(format!("unexpected '{c}' in word '{s}'"))),
            };
            k += 1;
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let idx: usize = chars[start..k]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse(format!("missing index after '{c}' in '{s}'")))?;
            if idx == 0 {
                return Err(Error::Parse(format!("generator indices start at 1 in '{s}'")));
            }
            let gen = 2 * (idx - 1) + usize::from(base == 'b');
            letters.push(Letter::new(gen, inv));
        }
        Ok(Word(letters))
    }
}

/// Name of generator `g` (`a1`, `b1`, …).
pub fn gen_name(g: usize) -> String {
    format!("{}{}", if g % 2 == 0 { 'a' } else { 'b' }, g / 2 + 1)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            let n = gen_name(l.gen);
            if l.inv {
                write!(f, "{}", n.to_ascii_uppercase())?;
            } else {
                write!(f, "{n}")?;
            }
        }
        Ok(())
    }
}

/// `⟨a₁, b₁, …, a_g, b_g | ∏ [aᵢ, bᵢ]⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePresentation {
    pub genus: usize,
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 1 {
            return Err(Error::DomainError("genus must be at least 1".into()));
        }
        Ok(SurfacePresentation { genus })
    }

    pub fn num_generators(&self) -> usize {
        2 * self.genus
    }

    pub fn a(i: usize) -> usize {
        2 * (i - 1)
    }

    pub fn b(i: usize) -> usize {
        2 * (i - 1) + 1
    }

    pub fn relator(&self) -> Word {
        let mut w = Word::identity();
        for i in 1..=self.genus {
            w = w.concat(&Word::commutator(&Word::gen(Self::a(i)), &Word::gen(Self::b(i))));
        }
        w
    }
}

/// `diag(e^{iφ/2}, e^{-iφ/2})`, rotation of the disk by `φ`.
fn rot(phi: f64) -> Matrix2<Complex64> {
    Matrix2::new(Complex64::from_polar(1.0, phi / 2.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, -phi / 2.0))
}

/// A one-relator presentation `⟨s₁, …, s_n | r⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub num_generators: usize,
    pub relator: Word,
}

impl Presentation {
    pub fn surface(genus: usize) -> Result<Presentation> {
        let p = SurfacePresentation::new(genus)?;
        Ok(Presentation { num_generators: p.num_generators(), relator: p.relator() })
    }

    /// `⟨a | aⁿ⟩`.
    pub fn cyclic(n: usize) -> Presentation {
        Presentation { num_generators: 1, relator: Word(vec![Letter::new(0, false); n]) }
    }
}

impl From<&SurfacePresentation> for Presentation {
    fn from(p: &SurfacePresentation) -> Presentation {
        Presentation { num_generators: p.num_generators(), relator: p.relator() }
    }
}

/// Disk automorphism sending 0 to `p`.
fn transl(p: Complex64) -> Matrix2<Complex64> {
    let s = 1.0 / (1.0 - p.norm_sqr()).sqrt();
    Matrix2::new(Complex64::new(s, 0.0), p * s, p.conj() * s, Complex64::new(s, 0.0))
}

fn cayley() -> Matrix2<Complex64> {
    Matrix2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))
}

/// Side pairings of the regular hyperbolic `4g`-gon with interior angle `2π/4g`, in SU(1,1).
pub fn fuchsian_su11_generators(g: usize) -> Result<Vec<Matrix2<Complex64>>> {
    if g < 2 {
        return Err(Error::DomainError(format!("genus {g} < 2")));
    }
    let n = (4 * g) as f64;
    let alpha = 2.0 * PI / n;
    let rho = ((alpha / 2.0).cos() / (PI / n).sin()).acosh();
    let rm = (rho / 2.0).tanh();
    let mid = |k: usize| Complex64::from_polar(rm, 2.0 * PI * k as f64 / n + PI / n);
    let half = |k: usize| {
        let t = transl(mid(k));
        t * rot(PI) * t.try_inverse().expect("invertible")
    };
    let pair = |k: usize, l: usize| half(k) * rot(2.0 * PI * (k as f64 - l as f64) / n);
    let mut out = Vec::with_capacity(2 * g);
    for i in 0..g {
        out.push(pair(4 * i, 4 * i + 2));
        out.push(pair(4 * i + 1, 4 * i + 3).try_inverse().expect("invertible"));
    }
    Ok(out)
}

/// Real `SL(2,ℝ)` generators of a genus-`g` surface group.
pub fn fuchsian_generators(g: usize) -> Result<Vec<Matrix2<f64>>> {
    let c = cayley();
    let ci = c.try_inverse().expect("invertible");
    Ok(fuchsian_su11_generators(g)?
        .into_iter()
        .map(|n| {
            let m = ci * n * c;
            Matrix2::new(m[(0, 0)].re, m[(0, 1)].re, m[(1, 0)].re, m[(1, 1)].re)
        })
        .collect())
}

/// Cayley conjugation `SL(2,ℝ) → SU(1,1)`.
pub fn to_su11(m: &Matrix2<f64>) -> Result<Matrix2<Complex64>> {
    let det = m.determinant();
    if (det - 1.0).abs() > 1e-9 {
        return Err(Error::DetNotOne { det });
    }
    let c = cayley();
    let mc = m.map(|x| Complex64::new(x, 0.0));
    Ok(c * mc * c.try_inverse().expect("invertible"))
}

fn su11_residual(n: &Matrix2<Complex64>) -> f64 {
    let j = Matrix2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0));
    let form = (n.adjoint() * j * n - j).iter().map(|z| z.norm()).fold(0.0, f64::max);
    form.max((n.determinant() - Complex64::new(1.0, 0.0)).norm())
}

/// `diag(1, N)` with complex entries read as quaternions.
pub fn embed_su11(n: &Matrix2<Complex64>) -> Result<HMat> {
    let residual = su11_residual(n);
    if residual > 1e-9 {
        return Err(Error::NotInSU11 { residual });
    }
    let mut out = HMat::identity(3);
    for i in 0..2 {
        for j in 0..2 {
            out[(i + 1, j + 1)] = Quat::complex(n[(i, j)].re, n[(i, j)].im);
        }
    }
    Ok(out)
}

/// A real matrix preserving `diag(1,1,-1)`, viewed quaternionically.
pub fn embed_so21(m: &Matrix3<f64>) -> Result<HMat> {
    let eta = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0));
    let residual = (m.transpose() * eta * m - eta).abs().max();
    if residual > 1e-9 {
        return Err(Error::NotInSO21 { residual });
    }
    Ok(HMat::from_real(&(0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect::<Vec<_>>()))
}

/// `sl(2,ℝ)` basis with `tr(XY)/2 = diag(1, 1, -1)`.
fn sl2_basis() -> [Matrix2<f64>; 3] {
    [Matrix2::new(1.0, 0.0, 0.0, -1.0), Matrix2::new(0.0, 1.0, 1.0, 0.0), Matrix2::new(0.0, 1.0, -1.0, 0.0)]
}

/// Adjoint action of `SL(2,ℝ)` on `sl(2,ℝ)`, landing in SO(2,1).
pub fn sl2_to_so21(m: &Matrix2<f64>) -> Matrix3<f64> {
    let b = sl2_basis();
    let eta = [1.0, 1.0, -1.0];
    let mi = m.try_inverse().expect("unit determinant");
    Matrix3::from_fn(|i, j| {
        let y = m * b[j] * mi;
        (y * b[i]).trace() / 2.0 * eta[i]
    })
}

/// A homomorphism from a surface group into Sp(2,1), by generator images.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceRep {
    pub genus: usize,
    pub images: Vec<HMat>,
    pub tol: f64,
    pub arith: Arith,
}

impl SurfaceRep {
    /// Build and validate.
    pub fn new(genus: usize, images: Vec<HMat>, tol: f64) -> Result<SurfaceRep> {
        let rep = SurfaceRep { genus, images, tol, arith: Arith::Float };
        rep.validate()?;
        Ok(rep)
    }

    pub fn presentation(&self) -> SurfacePresentation {
        SurfacePresentation { genus: self.genus }
    }

    pub fn one_relator(&self) -> Presentation {
        Presentation::from(&self.presentation())
    }

    pub fn num_generators(&self) -> usize {
        2 * self.genus
    }

    pub fn image(&self, l: Letter) -> HMat {
        let m = &self.images[l.gen];
        if l.inv {
            m.sp_inverse()
        } else {
            m.clone()
        }
    }

    pub fn eval(&self, w: &Word) -> HMat {
        w.0.iter().fold(HMat::identity(3), |acc, &l| &acc * &self.image(l))
    }

    pub fn eval_str(&self, w: &str) -> Result<HMat> {
        let w = Word::parse(w)?;
        if let Some(l) = w.0.iter().find(|l| l.gen >= self.num_generators()) {
            return Err(Error::DomainError(format!("generator {} not in genus {}", gen_name(l.gen), self.genus)));
        }
        Ok(self.eval(&w))
    }

    /// Distance of the relator image from `±I` (Frobenius).
    pub fn relator_residual(&self) -> f64 {
        let r = self.eval(&self.presentation().relator());
        let id = HMat::identity(3);
        r.dist(&id).min(r.dist(&(-id)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.len() != 2 * self.genus {
            return Err(Error::DimensionMismatch { expected: format!("{} images", 2 * self.genus), got: format!("{}", self.images.len()) });
        }
        for m in &self.images {
            if !is_in_sp_tol(m, 2, self.tol.max(DEFAULT_TOL))? {
                return Err(Error::NotInGroup { residual: sp_residual(m) });
            }
        }
        let residual = self.relator_residual();
        if residual > self.tol.max(DEFAULT_TOL) {
            return Err(Error::RelatorResidual { residual, tol: self.tol });
        }
        Ok(())
    }

    pub fn map_images(&self, f: impl Fn(usize, &HMat) -> HMat) -> SurfaceRep {
        SurfaceRep { images: self.images.iter().enumerate().map(|(k, m)| f(k, m)).collect(), ..self.clone() }
    }

    /// `g ρ g⁻¹`.
    pub fn conjugate(&self, g: &HMat) -> SurfaceRep {
        let gi = g.sp_inverse();
        self.map_images(|_, m| &(g * m) * &gi)
    }

    pub fn to_json(&self) -> Value {
        let mut images = Map::new();
        for (k, m) in self.images.iter().enumerate() {
            images.insert(gen_name(k), hmatrix_json(m));
        }
        json!({
            "genus": self.genus,
            "images": Value::Object(images),
            "arith": "float",
            "tol": self.tol,
        })
    }

    /// Parse the interchange format. Exact entries are converted to floats.
    pub fn from_json(v: &Value) -> Result<SurfaceRep> {
        let genus = v.get("genus").and_then(Value::as_u64).ok_or_else(|| Error::Schema("missing integer 'genus'".into()))? as usize;
        let arith = match v.get("arith").and_then(Value::as_str) {
            None | Some("float") => Arith::Float,
            Some("exact") => Arith::Exact,
            Some(other) => return Err(Error::Schema(format!("unknown arith '{other}'"))),
        };
        let tol = match v.get("tol") {
            Some(t) => parse_f64(t)?,
            None => DEFAULT_TOL,
        };
        let imgs = v.get("images").and_then(Value::as_object).ok_or_else(|| Error::Schema("missing object 'images'".into()))?;
        let mut images = Vec::with_capacity(2 * genus);
        for k in 0..2 * genus {
            let name = gen_name(k);
            let m = imgs.get(&name).ok_or_else(|| Error::Schema(format!("missing image for {name}")))?;
            let m = match arith {
                Arith::Float => parse_hmatrix(m)?,
                Arith::Exact => parse_hmatrix_exact(m)?.to_f64(),
            };
            if m.nrows() != 3 || m.ncols() != 3 {
                return Err(Error::Schema(format!("image of {name} must be 3x3")));
            }
            images.push(m);
        }
        if imgs.len() != 2 * genus {
            return Err(Error::Schema(format!("expected {} images, got {}", 2 * genus, imgs.len())));
        }
        let rep = SurfaceRep { genus, images, tol, arith };
        rep.validate()?;
        Ok(rep)
    }
}

/// Fuchsian group through `SU(1,1) → Sp(1,1) → Sp(2,1)`; stabilizes the line `{(0, ℍ)}`.
pub fn fuchsian_su11_rep(g: usize) -> Result<SurfaceRep> {
    let images = fuchsian_generators(g)?.iter().map(|m| embed_su11(&to_su11(m)?)).collect::<Result<Vec<_>>>()?;
    SurfaceRep::new(g, images, DEFAULT_TOL)
}

/// The same Fuchsian group through `SL(2,ℝ) → SO(2,1) → Sp(2,1)`; all entries real.
pub fn fuchsian_so21_rep(g: usize) -> Result<SurfaceRep> {
    let images = fuchsian_generators(g)?.iter().map(|m| embed_so21(&sl2_to_so21(m))).collect::<Result<Vec<_>>>()?;
    SurfaceRep::new(g, images, DEFAULT_TOL)
}
