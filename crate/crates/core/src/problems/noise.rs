use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_positive, Error, Result};
use crate::linalg::{norm, Vector};

pub const DEFAULT_SEED: u64 = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Absolute noise level `||f_delta - f||`.
    pub delta: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        check_positive("delta", delta)?;
        Ok(Self { delta, seed })
    }
}

/// Standard normal vector of length `m`, a pure function of `(seed, m)`.
pub fn gaussian_vector(m: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// `f + delta e / ||e||` with `e` standard normal; exactly `delta` away from
/// `f` up to rounding.
pub fn add_noise(f: &[f64], spec: NoiseSpec) -> Result<Vector> {
    check_positive("delta", spec.delta)?;
    if f.is_empty() {
        return Err(Error::InvalidInput("cannot perturb an empty vector".into()));
    }
    let mut seed = spec.seed;
    let e = loop {
        let e = gaussian_vector(f.len(), seed);
        if norm(&e) > 0.0 {
            break e;
        }
        seed = seed.wrapping_add(1);
    };
    let scale = spec.delta / norm(&e);
    Vector::new(f.iter().zip(&e).map(|(fi, ei)| fi + scale * ei).collect())
}
