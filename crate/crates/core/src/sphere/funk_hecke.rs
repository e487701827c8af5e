//! Funk–Hecke coefficients of the zonal kernels `(x, y) ↦ ⟨x, y⟩ⁿ`:
//! `λ_k^n` is the weight with which the degree-`k` harmonic block appears in
//! the Mercer expansion of `⟨x,y⟩ⁿ` on `S^d`.
//!
//! The quadrature route is authoritative. A printed closed form (for d ≥ 2)
//! is provided alongside for validation: it matches the quadrature up to one
//! global constant per dimension, and shares its zero pattern exactly.

use crate::error::Result;
use crate::quad::integrate;
use crate::special::gamma_half;
use crate::tol;

use super::gegenbauer::{gegenbauer, gegenbauer_at_one, sphere_lambda};

/// Whether `λ_k^n` vanishes identically: `k > n`, or `k − n` odd.
pub fn funk_hecke_is_zero(k: usize, n: usize) -> bool {
    k > n || (n - k) % 2 == 1
}

/// `λ_k^n` on `S^d` by Gauss–Legendre quadrature of
/// `c_d / C_k(1) ∫ tⁿ C_k^{(d-1)/2}(t) (1-t²)^{(d-2)/2} dt`
/// with `c_d = Γ((d+1)/2) / (√π Γ(d/2))`.
///
/// Structural zeros (`k > n` or `k − n` odd) are returned as exact `0.0`
/// without quadrature.
pub fn funk_hecke_lambda(k: usize, n: usize, d: usize) -> Result<f64> {
    if funk_hecke_is_zero(k, n) {
        return Ok(0.0);
    }
    let lam = sphere_lambda(d);
    let norm = gamma_half((d + 1) as u32)
        / (std::f64::consts::PI.sqrt() * gamma_half(d as u32));
    let ck1 = gegenbauer_at_one(k, lam);
    // Substituted form over θ ∈ [0, π]: the weight (sin θ)^{d-1} is smooth
    // for every d ≥ 1, unlike the endpoint-singular t-form at d = 1.
    let integral = integrate(
        &|theta: f64| {
            let t = theta.cos();
            t.powi(n as i32)
                * gegenbauer(k, lam, t).expect("t in range")
                * theta.sin().powi(d as i32 - 1)
        },
        0.0,
        std::f64::consts::PI,
    )?;
    let value = norm * integral / ck1;
    // Quadrature noise on a structurally nonzero coefficient.
    if value.abs() < tol::TAU_QUAD {
        return Ok(value.max(0.0));
    }
    Ok(value)
}

/// The printed closed form
/// `π 2^{d-n-1} Γ(k+d-1) Γ(n+1) / (k! Γ((d-1)/2) Γ((k+d+n)/2) Γ((n-k+2)/2))`,
/// defined for `d ≥ 2` (the `Γ((d-1)/2)` factor degenerates at `d = 1`).
///
/// A validation aid only: it shares the exact zero/positivity pattern with
/// the quadrature value, but its magnitude deviates by a factor that depends
/// on `(k, n)` — at `d = 2` the deviation is `2√π` at `(0,0)` and grows with
/// `(k+n)/2`. The quadrature route is authoritative.
pub fn funk_hecke_lambda_closed(k: usize, n: usize, d: usize) -> Option<f64> {
    if d < 2 {
        return None;
    }
    if funk_hecke_is_zero(k, n) {
        return Some(0.0);
    }
    let mut k_fact = 1.0;
    for j in 2..=k {
        k_fact *= j as f64;
    }
    let value = std::f64::consts::PI
        * 2.0f64.powi(d as i32 - n as i32 - 1)
        * gamma_half(2 * (k + d - 1) as u32)
        * gamma_half(2 * (n + 1) as u32)
        / (k_fact
            * gamma_half((d - 1) as u32)
            * gamma_half((k + d + n) as u32)
            * gamma_half((n - k + 2) as u32));
    Some(value)
}
