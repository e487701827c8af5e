//! Shared numerical tolerances.
//!
//! Every threshold used to turn an exact dichotomy (`= 0` vs `> 0`) into a
//! floating-point decision lives here, so that the Gram-matrix route and the
//! spectral route cut at the same place.

/// Mass-balance tolerance for probability validation.
///
/// Double precision leaves ample headroom over accumulation error for
/// spaces up to ~10^6 points.
pub const TAU_MASS: f64 = 1e-12;

/// Relative positive-semidefiniteness tolerance: the smallest eigenvalue of a
/// stored Gram matrix must be `>= -TAU_PSD * ||K||`.
pub const TAU_PSD: f64 = 1e-10;

/// Relative eigenvalue cut: eigenvalues below `TAU_EIG_REL * lambda_max` are
/// treated as zero in rank and verdict decisions.
pub const TAU_EIG_REL: f64 = 1e-10;

/// Relative tolerance for detecting a constant eigenfunction.
pub const TAU_CONST: f64 = 1e-8;

/// Relative tolerance for deciding whether an eigenfunction has zero mean
/// under the reference measure.
pub const TAU_ZERO_MEAN: f64 = 1e-8;

/// Adaptive quadrature target: two refinements must agree to this tolerance.
pub const TAU_QUAD: f64 = 1e-10;

/// Positivity cut for Schoenberg coefficients (absolute, relative to the
/// largest coefficient magnitude but never below the floor).
pub fn schoenberg_positive_cut(max_abs: f64) -> f64 {
    1e-10 * max_abs.max(1.0)
}
