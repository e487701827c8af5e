//! Coefficient analysis for isotropic kernels: projection of `ψ` onto
//! normalized Gegenbauer polynomials (the d-sequence) and extraction of the
//! power-basis sequence of `ψ(θ) = Σ b_n cosⁿθ` (the ∞-sequence).
//!
//! All integrals run over `θ ∈ [0, π]` after the substitution `t = cos θ`,
//! which keeps the weight `(sin θ)^{d-1}` smooth for every `d ≥ 1`. Node
//! counts double until two refinements agree; the normalization is fixed
//! operationally by the round-trip requirement that analysis inverts
//! synthesis on coefficient space.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, MAX_NODES};
use crate::tol;

use super::gegenbauer::{gegenbauer_at_one, sphere_lambda};

/// d-Schoenberg coefficients of `ψ` for degrees `0..=n_max`:
/// `b_n = ∫ ψ G_n w / ∫ G_n² w` with `G_n = C_n^{(d-1)/2}/C_n^{(d-1)/2}(1)`.
pub fn analyze_gegenbauer<F: Fn(f64) -> f64>(psi: &F, d: usize, n_max: usize) -> Result<Vec<f64>> {
    if d < 1 {
        return Err(Error::InvalidParameter("sphere dimension must be >= 1".into()));
    }
    let mut m = 64.max(2 * (n_max + 1));
    let mut prev = gegenbauer_projection(psi, d, n_max, m);
    while m <= MAX_NODES {
        m *= 2;
        let next = gegenbauer_projection(psi, d, n_max, m);
        let scale = next.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let diff = prev
            .iter()
            .zip(&next)
            .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        if diff <= tol::TAU_QUAD * (1.0 + scale) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence(MAX_NODES))
}

fn gegenbauer_projection<F: Fn(f64) -> f64>(
    psi: &F,
    d: usize,
    n_max: usize,
    nodes: usize,
) -> Vec<f64> {
    let lam = sphere_lambda(d);
    let norms: Vec<f64> = (0..=n_max).map(|n| gegenbauer_at_one(n, lam)).collect();
    let (xs, ws) = gauss_legendre(nodes);
    let half_pi = 0.5 * std::f64::consts::PI;
    let mut num = vec![0.0; n_max + 1];
    let mut den = vec![0.0; n_max + 1];
    let mut g = vec![0.0; n_max + 1];
    for (x, w) in xs.iter().zip(&ws) {
        let theta = half_pi * (x + 1.0);
        let weight = w * half_pi * theta.sin().powi(d as i32 - 1);
        let t = theta.cos();
        normalized_gegenbauer_all(lam, t, &norms, &mut g);
        let f = psi(theta);
        for n in 0..=n_max {
            num[n] += weight * f * g[n];
            den[n] += weight * g[n] * g[n];
        }
    }
    num.iter().zip(&den).map(|(a, b)| a / b).collect()
}

/// Evaluates `C_n^λ(t)/C_n^λ(1)` for all degrees at once via the recurrence.
fn normalized_gegenbauer_all(lam: f64, t: f64, norms: &[f64], out: &mut [f64]) {
    let n_max = out.len() - 1;
    if lam == 0.0 {
        let theta = t.clamp(-1.0, 1.0).acos();
        for (n, o) in out.iter_mut().enumerate() {
            *o = (n as f64 * theta).cos();
        }
        return;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lam * t;
    out[0] = 1.0;
    if n_max >= 1 {
        out[1] = cur / norms[1];
    }
    for k in 2..=n_max {
        let kf = k as f64;
        let next = (2.0 * (kf + lam - 1.0) * t * cur - (kf + 2.0 * lam - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
        out[k] = cur / norms[k];
    }
}

/// Power-basis coefficients of `ψ(θ) = Σ b_n cosⁿθ` for `n ≤ n_max`,
/// recovered through a Chebyshev expansion of `t ↦ ψ(arccos t)` and an exact
/// integer change of basis.
pub fn analyze_power<F: Fn(f64) -> f64>(psi: &F, n_max: usize) -> Result<Vec<f64>> {
    let k_max = n_max + 16;
    let cheb = chebyshev_coefficients(psi, k_max)?;
    let table = chebyshev_monomial_table(k_max);
    let mut out = vec![0.0; n_max + 1];
    for (m, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in m..=k_max {
            let c = table[k][m];
            if c != 0 {
                acc += cheb[k] * c as f64;
            }
        }
        *o = acc;
    }
    Ok(out)
}

/// Chebyshev coefficients `a_k` with `ψ(θ) = Σ a_k cos kθ`.
///
/// Converged to near machine precision, not the usual quadrature target: the
/// change of basis to monomials multiplies coefficient noise by factors that
/// grow like `2^k`, so the inputs must be as clean as the arithmetic allows.
/// Coefficients below the noise floor are zeroed for the same reason.
fn chebyshev_coefficients<F: Fn(f64) -> f64>(psi: &F, k_max: usize) -> Result<Vec<f64>> {
    let tight = 1e-14;
    let mut m = 64.max(2 * (k_max + 1));
    let mut prev = chebyshev_pass(psi, k_max, m);
    while m <= MAX_NODES {
        m *= 2;
        let mut next = chebyshev_pass(psi, k_max, m);
        let scale = next.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let diff = prev
            .iter()
            .zip(&next)
            .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        if diff <= tight * (1.0 + scale) {
            for a in &mut next {
                if a.abs() < tight * (1.0 + scale) {
                    *a = 0.0;
                }
            }
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence(MAX_NODES))
}

fn chebyshev_pass<F: Fn(f64) -> f64>(psi: &F, k_max: usize, nodes: usize) -> Vec<f64> {
    let (xs, ws) = gauss_legendre(nodes);
    let half_pi = 0.5 * std::f64::consts::PI;
    let pi = std::f64::consts::PI;
    let mut acc = vec![0.0; k_max + 1];
    for (x, w) in xs.iter().zip(&ws) {
        let theta = half_pi * (x + 1.0);
        let f = psi(theta) * w * half_pi;
        for (k, a) in acc.iter_mut().enumerate() {
            *a += f * (k as f64 * theta).cos();
        }
    }
    for (k, a) in acc.iter_mut().enumerate() {
        *a *= if k == 0 { 1.0 / pi } else { 2.0 / pi };
    }
    acc
}

/// Monomial coefficients of the Chebyshev polynomials, exact in integers:
/// `T_k(t) = Σ_m table[k][m] t^m`.
fn chebyshev_monomial_table(k_max: usize) -> Vec<Vec<i128>> {
    let mut table: Vec<Vec<i128>> = Vec::with_capacity(k_max + 1);
    table.push(vec![1]);
    if k_max >= 1 {
        table.push(vec![0, 1]);
    }
    for k in 2..=k_max {
        let mut row = vec![0i128; k + 1];
        for (m, &c) in table[k - 1].iter().enumerate() {
            row[m + 1] += 2 * c;
        }
        for (m, &c) in table[k - 2].iter().enumerate() {
            row[m] -= c;
        }
        table.push(row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::gegenbauer::gegenbauer;

    #[test]
    fn chebyshev_table_small_rows() {
        let t = chebyshev_monomial_table(4);
        assert_eq!(t[0], vec![1]);
        assert_eq!(t[1], vec![0, 1]);
        assert_eq!(t[2], vec![-1, 0, 2]);
        assert_eq!(t[3], vec![0, -3, 0, 4]);
        assert_eq!(t[4], vec![1, 0, -8, 0, 8]);
    }

    #[test]
    fn synthesize_then_recover_gegenbauer() {
        let d = 2;
        let want = [0.5, 0.3, 0.2];
        let lam = sphere_lambda(d);
        let psi = move |theta: f64| -> f64 {
            want.iter()
                .enumerate()
                .map(|(n, b)| {
                    b * gegenbauer(n, lam, theta.cos()).unwrap() / gegenbauer_at_one(n, lam)
                })
                .sum()
        };
        let got = analyze_gegenbauer(&psi, d, 6).unwrap();
        for (n, b) in want.iter().enumerate() {
            assert!((got[n] - b).abs() < 1e-8, "b[{n}] = {}", got[n]);
        }
        for b in &got[3..] {
            assert!(b.abs() < 1e-8);
        }
    }

    #[test]
    fn constant_psi_is_pure_degree_zero() {
        for d in [1, 2, 3] {
            let got = analyze_gegenbauer(&|_| 1.0, d, 5).unwrap();
            assert!((got[0] - 1.0).abs() < 1e-10, "d={d}");
            for b in &got[1..] {
                assert!(b.abs() < 1e-10, "d={d}");
            }
        }
    }

    #[test]
    fn exponential_power_sequence_is_factorial() {
        let c = 1.0f64;
        let got = analyze_power(&move |theta: f64| (c * theta.cos()).exp(), 15).unwrap();
        let mut fact = 1.0;
        for (n, b) in got.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let want = c.powi(n as i32) / fact;
            assert!((b - want).abs() < 1e-8, "b[{n}] = {b}, want {want}");
        }
    }

    #[test]
    fn polynomial_power_sequence_is_exact() {
        let got = analyze_power(&|theta: f64| 0.25 + 0.5 * theta.cos().powi(3), 6).unwrap();
        let want = [0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-10);
        }
    }
}
