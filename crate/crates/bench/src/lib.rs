//! Deterministic fixture builders shared by the benchmarks.

use charkern::nalgebra::DMatrix;
use charkern::{Density, DiscreteSpace, KernelSpec, SignedMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense random PSD kernel on a uniform space.
pub fn psd_kernel(n: usize, seed: u64) -> KernelSpec {
    let mut rng = seeded(seed);
    let a = DMatrix::from_fn(n, n, |_, _| 2.0 * rng.random::<f64>() - 1.0);
    KernelSpec::new(DiscreteSpace::uniform(n), a.transpose() * &a).unwrap()
}

pub fn probability(n: usize, seed: u64) -> SignedMeasure {
    let mut rng = seeded(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    SignedMeasure::new(
        DiscreteSpace::uniform(n),
        raw.into_iter().map(|v| v / total).collect(),
    )
    .unwrap()
}

pub fn density(n: usize, seed: u64) -> Density {
    probability(n, seed).to_density().unwrap()
}
