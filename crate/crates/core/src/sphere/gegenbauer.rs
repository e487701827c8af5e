//! Gegenbauer polynomial evaluation and spherical-harmonic dimension counts.

use crate::error::{Error, Result};
use crate::special::binomial;

/// Gegenbauer polynomial `C_n^λ(t)` for `λ ≥ 0` and `t ∈ [−1, 1]`.
///
/// Three-term recurrence for `λ > 0`; the `λ = 0` limit uses the convention
/// `C_n^0(cos θ) = cos(nθ)`, i.e. the Chebyshev polynomial.
pub fn gegenbauer(n: usize, lam: f64, t: f64) -> Result<f64> {
    if t.abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "gegenbauer argument {t} outside [-1, 1]"
        )));
    }
    let t = t.clamp(-1.0, 1.0);
    if lam == 0.0 {
        return Ok((n as f64 * t.acos()).cos());
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lam * t;
    for k in 2..=n {
        let k = k as f64;
        let next = (2.0 * (k + lam - 1.0) * t * cur - (k + 2.0 * lam - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `C_n^λ(1)`, the maximum of `|C_n^λ|` on `[−1, 1]`.
///
/// Equals the binomial `(n + 2λ − 1 choose n)`, evaluated as a running
/// product; 1 for the Chebyshev limit `λ = 0`.
pub fn gegenbauer_at_one(n: usize, lam: f64) -> f64 {
    if lam == 0.0 {
        return 1.0;
    }
    let mut acc = 1.0;
    for k in 0..n {
        acc = acc * (2.0 * lam + k as f64) / (k as f64 + 1.0);
    }
    acc
}

/// Normalized Gegenbauer `C_n^λ(t)/C_n^λ(1)`, clamped into `[−1, 1]`.
///
/// The clamp absorbs recurrence rounding near the endpoints, where the true
/// value attains ±1; it keeps the perturbation densities exactly nonnegative.
pub fn gegenbauer_normalized(n: usize, lam: f64, t: f64) -> Result<f64> {
    let v = gegenbauer(n, lam, t)? / gegenbauer_at_one(n, lam);
    Ok(v.clamp(-1.0, 1.0))
}

/// Gegenbauer parameter `(d − 1)/2` used by isotropic kernels on `S^d`.
pub fn sphere_lambda(d: usize) -> f64 {
    (d as f64 - 1.0) / 2.0
}

/// Dimension `N(d, n)` of the space of degree-`n` spherical harmonics on
/// `S^d`: `binom(n+d, n) − binom(n+d−2, n−2)`.
pub fn dim_harmonics(d: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let first = binomial((n + d) as u64, n as u64);
    let second = if n >= 2 {
        binomial((n + d - 2) as u64, (n - 2) as u64)
    } else {
        0.0
    };
    (first - second).round() as usize
}
