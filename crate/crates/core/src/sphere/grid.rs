//! Quadrature grids on S¹ and S² that reduce the sphere to a
//! [`DiscreteSpace`] carrying the normalized surface measure.
//!
//! S¹ uses equispaced angles (the trapezoid rule, exact for trigonometric
//! polynomials below the node count). S² uses Gauss–Legendre nodes in the
//! cosine of the polar angle crossed with equispaced azimuths; the product
//! rule integrates spherical polynomials exactly up to a degree reported by
//! [`SphereGrid::resolves_degree`].

use crate::error::{Error, Result};
use crate::measure::DiscreteSpace;
use crate::quad::gauss_legendre;

use super::gegenbauer::dim_harmonics;
use super::harmonics::harmonic_block;

/// Per-degree blocks of harmonic coefficients `c_{k,j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicCoeffs {
    pub d: usize,
    pub blocks: Vec<Vec<f64>>,
}

impl HarmonicCoeffs {
    /// Largest degree with a stored block.
    pub fn max_degree(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    /// Euclidean norm of the degree-`k` block (0 when absent).
    pub fn block_norm(&self, k: usize) -> f64 {
        self.blocks
            .get(k)
            .map(|b| b.iter().map(|c| c * c).sum::<f64>().sqrt())
            .unwrap_or(0.0)
    }

    /// Whether every block of degree ≥ 1 vanishes below `tol`: the function
    /// these coefficients describe is constant.
    pub fn is_constant(&self, tol: f64) -> bool {
        (1..self.blocks.len()).all(|k| {
            self.blocks[k].iter().all(|c| c.abs() <= tol)
        })
    }
}

/// A quadrature grid on `S^d`, `d ∈ {1, 2}`.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    d: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    space: DiscreteSpace,
}

impl SphereGrid {
    /// Equispaced grid of `m` angles on the circle.
    pub fn circle(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter("need at least 2 nodes".into()));
        }
        let nodes: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                vec![phi.cos(), phi.sin()]
            })
            .collect();
        let weights = vec![1.0 / m as f64; m];
        Ok(Self::assemble(1, nodes, weights))
    }

    /// Gauss–Legendre × equispaced-azimuth product grid on the 2-sphere.
    pub fn sphere(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        if n_polar < 1 || n_azimuth < 2 {
            return Err(Error::InvalidParameter("grid too small".into()));
        }
        let (u, w) = gauss_legendre(n_polar);
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for (up, wp) in u.iter().zip(&w) {
            let r = (1.0 - up * up).max(0.0).sqrt();
            for q in 0..n_azimuth {
                let phi = 2.0 * std::f64::consts::PI * q as f64 / n_azimuth as f64;
                nodes.push(vec![r * phi.cos(), r * phi.sin(), *up]);
                weights.push(wp / (2.0 * n_azimuth as f64));
            }
        }
        Ok(Self::assemble(2, nodes, weights))
    }

    fn assemble(d: usize, nodes: Vec<Vec<f64>>, weights: Vec<f64>) -> Self {
        let labels: Vec<String> = (0..nodes.len()).map(|i| format!("n{i}")).collect();
        let space = DiscreteSpace::new(labels, weights.clone()).expect("grid weights positive");
        Self {
            d,
            nodes,
            weights,
            space,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    /// Whether the product rule integrates spherical polynomials of this
    /// degree exactly.
    pub fn resolves_degree(&self, degree: usize) -> bool {
        match self.d {
            1 => degree < self.nodes.len(),
            _ => {
                let n_polar = self.polar_count();
                let n_azimuth = self.nodes.len() / n_polar;
                2 * n_polar > degree && degree < n_azimuth
            }
        }
    }

    fn polar_count(&self) -> usize {
        // Nodes were laid out polar-major; count distinct z values cheaply.
        let mut count = 1;
        for w in self.nodes.windows(2) {
            if w[0][2] != w[1][2] {
                count += 1;
            }
        }
        count
    }

    /// ∫ f dσ over the grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// Harmonic basis values per degree: `basis[k][j][node]`.
    pub fn harmonic_basis(&self, k_max: usize) -> Result<Vec<Vec<Vec<f64>>>> {
        let mut basis = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let width = dim_harmonics(self.d, k);
            let mut block = vec![vec![0.0; self.nodes.len()]; width];
            for (idx, node) in self.nodes.iter().enumerate() {
                let vals = harmonic_block(self.d, k, node)?;
                for (j, v) in vals.into_iter().enumerate() {
                    block[j][idx] = v;
                }
            }
            basis.push(block);
        }
        Ok(basis)
    }

    /// Harmonic analysis of per-node values: `c_{k,j} = ∫ e_{k,j} f dσ`.
    pub fn harmonic_analysis(&self, values: &[f64], k_max: usize) -> Result<HarmonicCoeffs> {
        if values.len() != self.nodes.len() {
            return Err(Error::InvalidParameter(
                "value vector length must match the grid".into(),
            ));
        }
        let basis = self.harmonic_basis(k_max)?;
        let blocks = basis
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|e| {
                        e.iter()
                            .zip(values)
                            .zip(&self.weights)
                            .map(|((ev, fv), w)| ev * fv * w)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Ok(HarmonicCoeffs { d: self.d, blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        let g1 = SphereGrid::circle(16).unwrap();
        assert!((g1.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let g2 = SphereGrid::sphere(8, 16).unwrap();
        assert!((g2.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((g2.integrate(&vec![1.0; g2.len()]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_bases_are_orthonormal_on_grids() {
        for (grid, k_max, tol) in [
            (SphereGrid::circle(64).unwrap(), 10, 1e-12),
            (SphereGrid::sphere(16, 32).unwrap(), 10, 1e-10),
        ] {
            let basis = grid.harmonic_basis(k_max).unwrap();
            let flat: Vec<&Vec<f64>> = basis.iter().flatten().collect();
            for (i, ei) in flat.iter().enumerate() {
                for (j, ej) in flat.iter().enumerate() {
                    let inner: f64 = ei
                        .iter()
                        .zip(ej.iter())
                        .zip(grid.weights())
                        .map(|((a, b), w)| a * b * w)
                        .sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (inner - want).abs() < tol,
                        "d={} <{i},{j}> = {inner}",
                        grid.d()
                    );
                }
            }
        }
    }

    #[test]
    fn polar_count_recovers_construction() {
        let g = SphereGrid::sphere(7, 20).unwrap();
        assert!(g.resolves_degree(13));
        assert!(!g.resolves_degree(20));
        let c = SphereGrid::circle(16).unwrap();
        assert!(c.resolves_degree(15));
        assert!(!c.resolves_degree(16));
    }

    #[test]
    fn analysis_picks_out_single_harmonics() {
        let grid = SphereGrid::sphere(12, 24).unwrap();
        let basis = grid.harmonic_basis(4).unwrap();
        let values = basis[3][2].clone();
        let coeffs = grid.harmonic_analysis(&values, 5).unwrap();
        for (k, block) in coeffs.blocks.iter().enumerate() {
            for (j, c) in block.iter().enumerate() {
                let want = if k == 3 && j == 2 { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-10, "c[{k}][{j}] = {c}");
            }
        }
        assert!(!coeffs.is_constant(1e-10));
        assert!((coeffs.block_norm(3) - 1.0).abs() < 1e-10);
    }
}
