//! Finite discrete spaces with reference measures, finite signed measures,
//! probability densities, total-variation geometry, and the Hahn–Jordan
//! decomposition.
//!
//! Every carrier in this crate — plain finite sets, finite Abelian groups,
//! sphere quadrature grids — reduces to a [`DiscreteSpace`]: an ordered list
//! of labelled points together with strictly positive reference weights.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug)]
struct SpaceData {
    points: Vec<String>,
    nu: Vec<f64>,
    index: HashMap<String, usize>,
}

/// A finite point set with a strictly positive reference measure ν.
///
/// Cloning is cheap (shared storage); all values are immutable after
/// construction.
#[derive(Clone)]
pub struct DiscreteSpace {
    data: Arc<SpaceData>,
}

impl fmt::Debug for DiscreteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteSpace")
            .field("points", &self.data.points)
            .field("nu", &self.data.nu)
            .finish()
    }
}

impl PartialEq for DiscreteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.points == other.data.points && self.data.nu == other.data.nu)
    }
}

impl DiscreteSpace {
    /// Builds a space from unique point labels and strictly positive weights.
    pub fn new<S: Into<String>>(points: Vec<S>, nu: Vec<f64>) -> Result<Self> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidSpace("space must contain at least one point".into()));
        }
        if points.len() != nu.len() {
            return Err(Error::InvalidSpace(format!(
                "{} points but {} weights",
                points.len(),
                nu.len()
            )));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate point label {p:?}")));
            }
        }
        for (i, &w) in nu.iter().enumerate() {
            if w <= 0.0 || !w.is_finite() {
                return Err(Error::InvalidSpace(format!(
                    "reference weight at index {i} must be strictly positive, got {w}"
                )));
            }
        }
        Ok(Self {
            data: Arc::new(SpaceData { points, nu, index }),
        })
    }

    /// Space with points `"0".."n-1"` and uniform weights `1/n`.
    pub fn uniform(n: usize) -> Self {
        let points: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::new(points, vec![1.0 / n as f64; n]).expect("uniform space is valid")
    }

    pub fn len(&self) -> usize {
        self.data.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.data.points
    }

    pub fn nu(&self) -> &[f64] {
        &self.data.nu
    }

    /// Total reference mass ν(X).
    pub fn nu_total(&self) -> f64 {
        self.data.nu.iter().sum()
    }

    /// Whether ν itself is a probability measure.
    pub fn nu_is_probability(&self) -> bool {
        (self.nu_total() - 1.0).abs() <= tol::TAU_MASS
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.data
            .index
            .get(label)
            .copied()
            .ok_or_else(|| Error::PointNotFound(label.to_string()))
    }

    /// Product space with points `"(a,b)"` and product reference weights.
    pub fn product(&self, other: &DiscreteSpace) -> DiscreteSpace {
        let mut points = Vec::with_capacity(self.len() * other.len());
        let mut nu = Vec::with_capacity(self.len() * other.len());
        for (a, &wa) in self.points().iter().zip(self.nu()) {
            for (b, &wb) in other.points().iter().zip(other.nu()) {
                points.push(format!("({a},{b})"));
                nu.push(wa * wb);
            }
        }
        DiscreteSpace::new(points, nu).expect("product of valid spaces is valid")
    }

    /// The reference measure ν as a signed measure on this space.
    pub fn nu_measure(&self) -> SignedMeasure {
        SignedMeasure {
            space: self.clone(),
            mass: self.data.nu.clone(),
        }
    }
}

/// A finite signed measure: one real mass per point of its space.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedMeasure {
    space: DiscreteSpace,
    mass: Vec<f64>,
}

impl SignedMeasure {
    pub fn new(space: DiscreteSpace, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "mass vector has {} entries on a {}-point space",
                mass.len(),
                space.len()
            )));
        }
        if mass.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidMeasure("mass entries must be finite".into()));
        }
        Ok(Self { space, mass })
    }

    pub fn zero(space: DiscreteSpace) -> Self {
        let n = space.len();
        Self {
            space,
            mass: vec![0.0; n],
        }
    }

    /// Unit point mass at `label`.
    pub fn dirac(space: DiscreteSpace, label: &str) -> Result<Self> {
        let i = space.index_of(label)?;
        let mut mass = vec![0.0; space.len()];
        mass[i] = 1.0;
        Ok(Self { space, mass })
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// μ(X) = Σ_x μ({x}).
    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Total variation norm Σ_x |μ({x})|.
    pub fn tv_norm(&self) -> f64 {
        self.mass.iter().map(|m| m.abs()).sum()
    }

    /// Whether μ lies in M₀, the closed subspace of zero-total-mass measures.
    pub fn is_zero_mass(&self) -> bool {
        self.total_mass().abs() <= tol::TAU_MASS
    }

    /// Whether μ is a probability measure: nonnegative mass summing to one.
    pub fn is_probability(&self) -> bool {
        self.mass.iter().all(|&m| m >= -tol::TAU_MASS)
            && (self.total_mass() - 1.0).abs() <= tol::TAU_MASS
    }

    /// Hahn–Jordan decomposition `μ = μ⁺ − μ⁻` with disjoint supports.
    pub fn hahn_jordan(&self) -> (SignedMeasure, SignedMeasure) {
        let pos = self.mass.iter().map(|&m| m.max(0.0)).collect();
        let neg = self.mass.iter().map(|&m| (-m).max(0.0)).collect();
        (
            SignedMeasure {
                space: self.space.clone(),
                mass: pos,
            },
            SignedMeasure {
                space: self.space.clone(),
                mass: neg,
            },
        )
    }

    /// Density of μ with respect to ν (well-defined since ν > 0 everywhere).
    pub fn density_values(&self) -> Vec<f64> {
        self.mass
            .iter()
            .zip(self.space.nu())
            .map(|(&m, &w)| m / w)
            .collect()
    }

    /// Converts a probability measure into its ν-density.
    pub fn to_density(&self) -> Result<Density> {
        if !self.is_probability() {
            return Err(Error::InvalidMeasure(
                "only probability measures convert to densities".into(),
            ));
        }
        Density::new(self.space.clone(), self.density_values())
    }

    pub fn scaled(&self, factor: f64) -> SignedMeasure {
        SignedMeasure {
            space: self.space.clone(),
            mass: self.mass.iter().map(|&m| m * factor).collect(),
        }
    }
}

/// Convex combination `(1−α)·P + α·Q`.
///
/// Preserves probability-measure status for `α ∈ [0,1]`.
pub fn mix(alpha: f64, p: &SignedMeasure, q: &SignedMeasure) -> Result<SignedMeasure> {
    if p.space != q.space {
        return Err(Error::SpaceMismatch);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "mixing weight must be in [0,1], got {alpha}"
        )));
    }
    let mass = p
        .mass
        .iter()
        .zip(&q.mass)
        .map(|(&a, &b)| (1.0 - alpha) * a + alpha * b)
        .collect();
    Ok(SignedMeasure {
        space: p.space.clone(),
        mass,
    })
}

macro_rules! assert_same_space {
    ($a:expr, $b:expr) => {
        assert!(
            $a.space == $b.space,
            "signed measure arithmetic requires a common space"
        );
    };
}

impl Sub for &SignedMeasure {
    type Output = SignedMeasure;
    fn sub(self, rhs: &SignedMeasure) -> SignedMeasure {
        assert_same_space!(self, rhs);
        SignedMeasure {
            space: self.space.clone(),
            mass: self
                .mass
                .iter()
                .zip(&rhs.mass)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for &SignedMeasure {
    type Output = SignedMeasure;
    fn add(self, rhs: &SignedMeasure) -> SignedMeasure {
        assert_same_space!(self, rhs);
        SignedMeasure {
            space: self.space.clone(),
            mass: self
                .mass
                .iter()
                .zip(&rhs.mass)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Mul<f64> for &SignedMeasure {
    type Output = SignedMeasure;
    fn mul(self, rhs: f64) -> SignedMeasure {
        self.scaled(rhs)
    }
}

impl Neg for &SignedMeasure {
    type Output = SignedMeasure;
    fn neg(self) -> SignedMeasure {
        self.scaled(-1.0)
    }
}

/// A ν-probability density: nonnegative values with ⟨h, ν⟩ = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    space: DiscreteSpace,
    values: Vec<f64>,
}

impl Density {
    pub fn new(space: DiscreteSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidDensity(format!(
                "density has {} entries on a {}-point space",
                values.len(),
                space.len()
            )));
        }
        if values.iter().any(|&h| h < -tol::TAU_MASS || !h.is_finite()) {
            return Err(Error::InvalidDensity("density values must be nonnegative".into()));
        }
        let integral: f64 = values.iter().zip(space.nu()).map(|(h, w)| h * w).sum();
        if (integral - 1.0).abs() > tol::TAU_MASS {
            return Err(Error::InvalidDensity(format!(
                "density integrates to {integral}, expected 1"
            )));
        }
        Ok(Self { space, values })
    }

    /// The constant density h ≡ 1 (requires ν to be a probability measure).
    pub fn constant_one(space: DiscreteSpace) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![1.0; n])
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The measure `h dν`.
    pub fn to_measure(&self) -> SignedMeasure {
        let mass = self
            .values
            .iter()
            .zip(self.space.nu())
            .map(|(h, w)| h * w)
            .collect();
        SignedMeasure {
            space: self.space.clone(),
            mass,
        }
    }
}
