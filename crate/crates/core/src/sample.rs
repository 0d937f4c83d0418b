//! Seeded random generators for tests and verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qcore::{HMat, LieElement, Quat};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[-1, 1]`.
pub fn sym(rng: &mut impl Rng) -> f64 {
    rng.random_range(-1.0..=1.0)
}

pub fn quat(rng: &mut impl Rng) -> Quat {
    Quat::new(sym(rng), sym(rng), sym(rng), sym(rng))
}

pub fn imag_quat(rng: &mut impl Rng) -> Quat {
    Quat::new(0.0, sym(rng), sym(rng), sym(rng))
}

pub fn unit_quat(rng: &mut impl Rng) -> Quat {
    loop {
        let q = quat(rng);
        let n = q.norm();
        if n > 1e-3 {
            return q.scale(&(1.0 / n));
        }
    }
}

pub fn lie(rng: &mut impl Rng, scale: f64) -> LieElement {
    let mut c = [0.0; 21];
    c.iter_mut().for_each(|x| *x = scale * sym(rng));
    LieElement(c)
}

/// `exp` of a random sp(2,1) element with coordinates in `[-scale, scale]`.
pub fn sp21(rng: &mut impl Rng, scale: f64) -> HMat {
    lie(rng, scale).to_matrix().exp()
}

pub fn vec_f64(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| sym(rng)).collect()
}
