//! Explicit real harmonic bases for the circle and the 2-sphere, normalized
//! against the *normalized* surface measure σ (so ∫ e² dσ = 1).
//!
//! On S¹ the degree-n block is `(√2 cos nφ, √2 sin nφ)`; on S² it is built
//! from associated Legendre functions. Higher dimensions use only zonal
//! machinery and never need an explicit basis.

use crate::error::{Error, Result};

/// Evaluates the degree-`n` real harmonic block at a point of `S^d`,
/// `d ∈ {1, 2}`. The point must be a unit vector of length `d + 1`.
pub fn harmonic_block(d: usize, n: usize, point: &[f64]) -> Result<Vec<f64>> {
    match d {
        1 => Ok(circle_block(n, point)),
        2 => Ok(sphere_block(n, point)),
        _ => Err(Error::InvalidParameter(format!(
            "explicit harmonic bases exist for d in {{1, 2}}, got {d}"
        ))),
    }
}

fn circle_block(n: usize, point: &[f64]) -> Vec<f64> {
    let phi = point[1].atan2(point[0]);
    if n == 0 {
        vec![1.0]
    } else {
        let s = std::f64::consts::SQRT_2;
        vec![s * (n as f64 * phi).cos(), s * (n as f64 * phi).sin()]
    }
}

fn sphere_block(n: usize, point: &[f64]) -> Vec<f64> {
    let z = point[2].clamp(-1.0, 1.0);
    let phi = point[1].atan2(point[0]);
    let mut out = Vec::with_capacity(2 * n + 1);
    // m = 0 zonal term, then (cos mφ, sin mφ) pairs.
    out.push(((2 * n + 1) as f64).sqrt() * assoc_legendre(n, 0, z));
    for m in 1..=n {
        let norm = (2.0 * (2 * n + 1) as f64 * factorial_ratio(n, m)).sqrt();
        let p = assoc_legendre(n, m, z);
        out.push(norm * p * (m as f64 * phi).cos());
        out.push(norm * p * (m as f64 * phi).sin());
    }
    out
}

/// (n−m)!/(n+m)! as a product of inverses, avoiding factorial overflow.
fn factorial_ratio(n: usize, m: usize) -> f64 {
    let mut acc = 1.0;
    for k in (n - m + 1)..=(n + m) {
        acc /= k as f64;
    }
    acc
}

/// Associated Legendre function `P_n^m(x)` without the Condon–Shortley phase.
fn assoc_legendre(n: usize, m: usize, x: f64) -> f64 {
    debug_assert!(m <= n);
    // P_m^m = (2m−1)!! (1−x²)^{m/2}
    let mut pmm = 1.0;
    if m > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= fact * somx2;
            fact += 2.0;
        }
    }
    if n == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if n == m + 1 {
        return pmmp1;
    }
    let mut pnm = 0.0;
    for k in (m + 2)..=n {
        pnm = (x * (2 * k - 1) as f64 * pmmp1 - (k + m - 1) as f64 * pmm) / (k - m) as f64;
        pmm = pmmp1;
        pmmp1 = pnm;
    }
    pnm
}
