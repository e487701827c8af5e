//! Gauss–Legendre quadrature with a doubling refinement loop.

use crate::error::{Error, Result};
use crate::tol;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Roots of the Legendre polynomial found by Newton iteration from the
/// Chebyshev-based initial guess; weights `2 / ((1 - x²) P_n'(x)²)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// ∫_a^b f(x) dx with the `n`-point Gauss–Legendre rule.
pub fn integrate_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Adaptive integration: the node count is doubled until two consecutive
/// refinements agree to `tol` (relative to the magnitude of the result).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut n = 16;
    let mut prev = integrate_fixed(f, a, b, n);
    while n <= MAX_NODES {
        n *= 2;
        let next = integrate_fixed(f, a, b, n);
        if (next - prev).abs() <= tol * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence(MAX_NODES))
}

/// Node cap for the adaptive loop.
pub const MAX_NODES: usize = 4096;

/// Adaptive integration at the shared default tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    integrate_adaptive(f, a, b, tol::TAU_QUAD)
}
