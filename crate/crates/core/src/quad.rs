//! Gauss–Hermite quadrature.
//!
//! Rules integrate e^(-x²)·f(x) over (-∞, ∞): ∫ ≈ Σ wᵢ f(xᵢ). Nodes and
//! weights come from the Golub–Welsch construction: eigenvalues of the
//! symmetric tridiagonal companion matrix with off-diagonal √(k/2), and
//! weights √π times the squared first eigenvector components.
//!
//! Gaussian averages are the only use in this crate, so the rule also
//! exposes nodes pre-scaled for a normal density: for X ~ N(0, σ²),
//! E[f(X)] = Σ (wᵢ/√π) f(√2 σ xᵢ).

use std::f64::consts::PI;

use nalgebra::DMatrix;

/// A Gauss–Hermite rule of fixed order.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Build the rule of the given order (number of nodes, ≥ 1).
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let n = order;
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let e = (k as f64 / 2.0).sqrt();
            companion[(k - 1, k)] = e;
            companion[(k, k - 1)] = e;
        }
        let eigen = companion.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let first = eigen.eigenvectors[(0, i)];
                (eigen.eigenvalues[i], first * first * PI.sqrt())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        GaussHermite {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ∫ e^(-x²) f(x) dx.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Nodes and probability weights for averaging against N(0, σ²):
    /// E[f(X)] = Σ wᵢ f(xᵢ) with Σ wᵢ = 1 (up to rounding).
    pub fn gaussian_abscissae(&self, sigma: f64) -> Vec<(f64, f64)> {
        let s = std::f64::consts::SQRT_2 * sigma;
        let inv_sqrt_pi = 1.0 / PI.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (s * x, w * inv_sqrt_pi))
            .collect()
    }
}
