//! Kernel scores, kernel mean distances, and decision procedures for whether
//! a kernel is characteristic or universal.
//!
//! Everything runs on finite discrete carriers: plain labelled point sets,
//! finite Abelian groups `Z_{m₁} × … × Z_{m_d}` with their characters, and
//! spheres `S¹`/`S²` through quadrature grids. Besides scoring and distance
//! computation the crate constructs explicit witnesses for the limits of
//! kernel mean embeddings: pairs of distributions that are far apart in total
//! variation yet (nearly) indistinguishable in the kernel metric.
//!
//! # Layout
//!
//! * [`measure`] — discrete spaces, signed measures, densities, TV geometry.
//! * [`kernel`] — Gram-matrix kernels: scores, squared mean distance,
//!   propriety gap, sum/product/plus-one calculus, matrix-rank verdicts.
//! * [`spectral`] — Mercer expansions, spectral distances and verdicts, and
//!   the counterexample constructions.
//! * [`group`] — characters of finite Abelian groups, the real orthonormal
//!   basis, translation-invariant kernels, and coefficient-based verdicts.
//! * [`sphere`] — Gegenbauer machinery, Schoenberg coefficients, spherical
//!   harmonics, Funk–Hecke coefficients, and zonal embeddings.
//! * [`json`] — serde DTOs for the file formats used by the CLI.

pub mod error;
pub mod group;
pub mod json;
pub mod kernel;
pub mod measure;
pub mod quad;
pub mod special;
pub mod spectral;
pub mod sphere;
pub mod tol;

pub use error::{Error, Result};
pub use kernel::{KernelSpec, KernelVerdict, Verdict};
pub use measure::{mix, Density, DiscreteSpace, SignedMeasure};
pub use spectral::{mercer_decompose, MercerExpansion, NoUniformPerturbation};

pub use nalgebra;
