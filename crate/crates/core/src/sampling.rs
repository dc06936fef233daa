//! Seeded random probe points used by the pointwise residual checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed direction on the unit sphere `S^{n-1}`.
pub fn unit_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Random point with radius in `[0.5, 2]` and uniform direction.
pub fn probe_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let radius = rng.random_range(0.5..2.0);
    unit_direction(n, rng)
        .into_iter()
        .map(|c| c * radius)
        .collect()
}

pub fn probe_points<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count).map(|_| probe_point(n, rng)).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}
