//! Shared fixtures for the integration suites.
//!
//! Each test target compiles its own copy, so not every helper is used by
//! every target.
#![allow(dead_code)]

use charkern::nalgebra::DMatrix;
use charkern::{DiscreteSpace, KernelSpec, SignedMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Space with random weights in [0.2, 1.2].
pub fn random_space(rng: &mut ChaCha8Rng, n: usize) -> DiscreteSpace {
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let nu: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
    DiscreteSpace::new(points, nu).unwrap()
}

/// Random PSD kernel K = AᵀA with A having entries in [-1, 1].
pub fn random_psd_kernel(rng: &mut ChaCha8Rng, space: DiscreteSpace) -> KernelSpec {
    let n = space.len();
    let a = DMatrix::from_fn(n, n, |_, _| 2.0 * rng.random::<f64>() - 1.0);
    KernelSpec::new(space, a.transpose() * &a).unwrap()
}

/// Random rank-deficient PSD kernel K = AᵀA with `rank` rows.
pub fn random_rank_deficient_kernel(
    rng: &mut ChaCha8Rng,
    space: DiscreteSpace,
    rank: usize,
) -> KernelSpec {
    let n = space.len();
    let a = DMatrix::from_fn(rank, n, |_, _| 2.0 * rng.random::<f64>() - 1.0);
    KernelSpec::new(space, a.transpose() * &a).unwrap()
}

/// Random probability measure.
pub fn random_probability(rng: &mut ChaCha8Rng, space: DiscreteSpace) -> SignedMeasure {
    let n = space.len();
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    SignedMeasure::new(space, raw.into_iter().map(|v| v / total).collect()).unwrap()
}

/// Random probability density with respect to the space's ν.
pub fn random_density(rng: &mut ChaCha8Rng, space: DiscreteSpace) -> charkern::Density {
    random_probability(rng, space).to_density().unwrap()
}

/// All non-decreasing moduli lists (factors ≥ 2) with product ≤ `limit`.
pub fn moduli_lists_up_to(limit: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, min: usize, budget: usize) {
        for m in min..=budget {
            current.push(m as u32);
            out.push(current.clone());
            recurse(out, current, m, budget / m);
            current.pop();
        }
    }
    recurse(&mut out, &mut current, 2, limit);
    out
}
