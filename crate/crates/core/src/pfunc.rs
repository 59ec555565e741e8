//! Evolution of arbitrary initial field states given by a diagonal
//! coherent-state expansion.
//!
//! An initial density matrix ρ̂_F(0) = ∫d²α Π(α,α*) |α⟩⟨α| turns, after
//! N confirmed measurements, into a weighted mixture of squeezed
//! coherent states: each coherent label α contributes weight
//! Π(α)·|M_N(α)|² and the common squeeze ξ_N. Survival probability,
//! mean quantum number and target fidelity are integrals over Π, which
//! this module evaluates exactly (point masses) or by tensor-product
//! Gauss–Hermite quadrature (thermal Gaussians), guarded by an
//! order-doubling convergence gate and an analytic tail check.

use num_complex::Complex64;

use crate::coherent::{squeezed_vacuum_fidelity, SqueezedCoherentLabel};
use crate::error::EnsembleError;
use crate::iterates::{propagate_amplitude, step_closure, StepClosure};
use crate::params::{ProjectedKernel, TargetSqueeze};
use crate::quad::GaussHermite;

/// Default Gauss–Hermite order per axis for thermal Π integrals.
pub const DEFAULT_ALPHA_QUAD_ORDER: usize = 32;

/// Relative change allowed when the quadrature order doubles.
pub const QUAD_GATE_REL: f64 = 1e-8;

/// Diagonal coherent-state weight of the initial field state.
///
/// Only nonsingular (or exactly integrable) weights are representable:
/// a point mass, a finite convex mixture of point masses, or a thermal
/// Gaussian Π(α) = exp(−|α−c|²/n̄)/(πn̄). Anything more singular is the
/// Fock oracle's job.
#[derive(Debug, Clone, PartialEq)]
pub enum PFunction {
    /// Pure coherent state |α₀⟩.
    Delta { alpha0: Complex64 },
    /// Σ wₖ |αₖ⟩⟨αₖ| with wₖ > 0, Σ wₖ = 1.
    CoherentMixture { parts: Vec<(f64, Complex64)> },
    /// Displaced thermal state: mean occupation n̄ > 0 around `center`.
    ThermalGaussian { nbar: f64, center: Complex64 },
}

impl PFunction {
    pub fn delta(alpha0: Complex64) -> Self {
        PFunction::Delta { alpha0 }
    }

    /// Validated convex mixture of coherent states.
    pub fn coherent_mixture(parts: Vec<(f64, Complex64)>) -> Result<Self, EnsembleError> {
        if parts.is_empty() {
            return Err(EnsembleError::InvalidPFunction {
                reason: "mixture needs at least one component".into(),
            });
        }
        if parts.iter().any(|&(w, _)| !(w > 0.0) || !w.is_finite()) {
            return Err(EnsembleError::InvalidPFunction {
                reason: "mixture weights must be finite and > 0".into(),
            });
        }
        let total: f64 = parts.iter().map(|&(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(EnsembleError::InvalidPFunction {
                reason: format!("mixture weights sum to {total}, expected 1"),
            });
        }
        Ok(PFunction::CoherentMixture { parts })
    }

    pub fn thermal(nbar: f64, center: Complex64) -> Result<Self, EnsembleError> {
        if !(nbar > 0.0) || !nbar.is_finite() {
            return Err(EnsembleError::InvalidPFunction {
                reason: format!("thermal occupation nbar = {nbar} must be finite and > 0"),
            });
        }
        Ok(PFunction::ThermalGaussian { nbar, center })
    }

    /// ∫d²α Π(α) |α|²  (exact Gaussian moments for the thermal case).
    pub(crate) fn second_moment(&self) -> f64 {
        match self {
            PFunction::Delta { alpha0 } => alpha0.norm_sqr(),
            PFunction::CoherentMixture { parts } => {
                parts.iter().map(|&(w, a)| w * a.norm_sqr()).sum()
            }
            PFunction::ThermalGaussian { nbar, center } => nbar + center.norm_sqr(),
        }
    }

    /// Decompose Π into quadrature points (weight, α). Point masses are
    /// exact; the thermal Gaussian uses an order × order tensor rule.
    pub(crate) fn quadrature_points(&self, order: usize) -> Vec<(f64, Complex64)> {
        match self {
            PFunction::Delta { alpha0 } => vec![(1.0, *alpha0)],
            PFunction::CoherentMixture { parts } => parts.clone(),
            PFunction::ThermalGaussian { nbar, center } => {
                let rule = GaussHermite::new(order);
                // α = c + √n̄ (x + iy) with (x, y) standard-normal pairs of
                // variance 1/2: Π d²α = e^{-(x²+y²)} dx dy / π.
                let scale = nbar.sqrt();
                let inv_pi = 1.0 / std::f64::consts::PI;
                let mut pts = Vec::with_capacity(order * order);
                for (&xj, &wj) in rule.nodes().iter().zip(rule.weights()) {
                    for (&xl, &wl) in rule.nodes().iter().zip(rule.weights()) {
                        let alpha = center + scale * Complex64::new(xj, xl);
                        pts.push((wj * wl * inv_pi, alpha));
                    }
                }
                pts
            }
        }
    }
}

/// Weighted squeezed-coherent mixture after N measurements.
///
/// Raw weights sum to the survival probability; dividing by
/// `normalization` makes them a probability distribution over rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldEnsemble {
    pub rows: Vec<EnsembleRow>,
    /// P(Nτ) = Σ row weights (1 for trace-preserving evolutions).
    pub normalization: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleRow {
    pub weight: f64,
    pub label: SqueezedCoherentLabel,
}

fn rows_for(closure: &StepClosure, points: &[(f64, Complex64)]) -> (Vec<EnsembleRow>, f64) {
    let xi = closure.xi_n();
    let rows: Vec<EnsembleRow> = points
        .iter()
        .map(|&(w, alpha)| {
            let img = propagate_amplitude(closure, alpha);
            EnsembleRow {
                weight: w * (2.0 * img.log_norm.re).exp(),
                label: SqueezedCoherentLabel {
                    alpha: img.alpha_n,
                    xi,
                },
            }
        })
        .collect();
    // Fixed summation order keeps results identical across thread counts.
    let total = rows.iter().map(|r| r.weight).sum();
    (rows, total)
}

/// The α-dependent Gaussian exponent of |M_N(α)|² is
/// −[a|α|² + Re(b α²)]; its smallest eigenvalue is a − |b|. The thermal
/// integral converges iff 1/n̄ + a − |b| > 0.
fn thermal_tail_margin(closure: &StepClosure, nbar: f64) -> f64 {
    let cosh2 = closure.r_n.cosh().powi(2);
    let a = 1.0 - (-2.0 * closure.kappa_n.re).exp() * cosh2;
    let b = closure.zeta_n + closure.zeta_n.conj() * (-2.0 * closure.kappa_n).exp() * cosh2;
    1.0 / nbar + a - b.norm()
}

/// Evolve an initial P-function through N measurements.
///
/// Point-mass inputs are exact. Thermal inputs are integrated at
/// `alpha_quad_order` per axis and re-integrated at twice that order;
/// if the survival probability moves by more than [`QUAD_GATE_REL`]
/// relative, or the integrand fails the analytic tail check, the
/// evolution is refused. The converged (doubled-order) rows are
/// returned.
pub fn evolve_ensemble(
    kernel: &ProjectedKernel,
    pfunc: &PFunction,
    n_steps: u32,
    alpha_quad_order: usize,
) -> Result<FieldEnsemble, EnsembleError> {
    let closure = step_closure(kernel, n_steps);
    match pfunc {
        PFunction::Delta { .. } | PFunction::CoherentMixture { .. } => {
            let (rows, total) = rows_for(&closure, &pfunc.quadrature_points(0));
            Ok(FieldEnsemble {
                rows,
                normalization: total,
            })
        }
        PFunction::ThermalGaussian { nbar, .. } => {
            let margin = thermal_tail_margin(&closure, *nbar);
            if margin <= 1e-12 {
                return Err(EnsembleError::QuadratureNotConverged {
                    order: alpha_quad_order,
                    detail: format!(
                        "integrand tail does not decay: 1/nbar + a - |b| = {margin:.3e}"
                    ),
                });
            }
            let (_, coarse) = rows_for(&closure, &pfunc.quadrature_points(alpha_quad_order));
            let (rows, fine) = rows_for(&closure, &pfunc.quadrature_points(2 * alpha_quad_order));
            let change = (coarse - fine).abs() / fine.max(f64::MIN_POSITIVE);
            if change > QUAD_GATE_REL {
                return Err(EnsembleError::QuadratureNotConverged {
                    order: alpha_quad_order,
                    detail: format!("survival moved by {change:.3e} under order doubling"),
                });
            }
            Ok(FieldEnsemble {
                rows,
                normalization: fine,
            })
        }
    }
}

/// ⟨â†â⟩ of the ensemble: sinh²r_N + Σ (wᵢ/P)|α_N,ᵢ|².
pub fn ensemble_mean_quanta(ensemble: &FieldEnsemble, closure: &StepClosure) -> f64 {
    let s = closure.r_n.sinh();
    let displaced: f64 = ensemble
        .rows
        .iter()
        .map(|r| r.weight * r.label.alpha.norm_sqr())
        .sum();
    s * s + displaced / ensemble.normalization
}

/// Fidelity of the ensemble to the target squeezed vacuum:
/// Σ (wᵢ/P)·|⟨ξ|α_N,ᵢ, ξ_N⟩|².
pub fn ensemble_fidelity(
    ensemble: &FieldEnsemble,
    target: &TargetSqueeze,
    closure: &StepClosure,
) -> f64 {
    let xi = closure.xi_n();
    let total: f64 = ensemble
        .rows
        .iter()
        .map(|r| {
            let label = SqueezedCoherentLabel {
                alpha: r.label.alpha,
                xi,
            };
            r.weight * squeezed_vacuum_fidelity(target, &label)
        })
        .sum();
    (total / ensemble.normalization).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{fidelity_to_target, mean_quanta, survival_log_prob};
    use crate::params::{derive_kernel, fig1_params, target_squeeze};
    use approx::assert_relative_eq;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn fig1_kernel() -> crate::params::ProjectedKernel {
        derive_kernel(&fig1_params()).unwrap()
    }

    #[test]
    fn mixture_validation() {
        assert!(PFunction::coherent_mixture(vec![]).is_err());
        assert!(PFunction::coherent_mixture(vec![(0.5, ONE), (0.6, -ONE)]).is_err());
        assert!(PFunction::coherent_mixture(vec![(-0.5, ONE), (1.5, -ONE)]).is_err());
        assert!(PFunction::coherent_mixture(vec![(0.5, ONE), (0.5, -ONE)]).is_ok());
        assert!(PFunction::thermal(0.0, ONE).is_err());
        assert!(PFunction::thermal(0.5, Complex64::new(0.0, 0.0)).is_ok());
    }

    #[test]
    fn delta_reduces_to_coherent_track() {
        let k = fig1_kernel();
        let pf = PFunction::delta(ONE);
        for n in [1_u32, 3, 7] {
            let ens = evolve_ensemble(&k, &pf, n, 8).unwrap();
            assert_eq!(ens.rows.len(), 1);
            assert_relative_eq!(
                ens.normalization,
                survival_log_prob(&k, ONE, n).exp(),
                max_relative = 1e-13
            );
            let closure = step_closure(&k, n);
            assert_relative_eq!(
                ensemble_mean_quanta(&ens, &closure),
                mean_quanta(&k, ONE, n),
                max_relative = 1e-13
            );
            let target = target_squeeze(&k);
            assert_relative_eq!(
                ensemble_fidelity(&ens, &target, &closure),
                fidelity_to_target(&k, ONE, n),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn mixture_is_weight_linear() {
        let k = fig1_kernel();
        let parts = vec![(0.5, ONE), (0.5, -ONE)];
        let pf = PFunction::coherent_mixture(parts.clone()).unwrap();
        let n = 4;
        let ens = evolve_ensemble(&k, &pf, n, 8).unwrap();
        let mut expect = 0.0;
        for (w, a) in parts {
            expect += w * survival_log_prob(&k, a, n).exp();
        }
        assert_relative_eq!(ens.normalization, expect, max_relative = 1e-13);
    }

    #[test]
    fn symmetric_mixture_matches_reference() {
        // ±α₀ components survive identically, so P and F match the pure
        // case; frozen values double-check the ensemble bookkeeping.
        let k = fig1_kernel();
        let target = target_squeeze(&k);
        let pf = PFunction::coherent_mixture(vec![(0.5, ONE), (0.5, -ONE)]).unwrap();
        let ens = evolve_ensemble(&k, &pf, 5, 8).unwrap();
        let closure = step_closure(&k, 5);
        assert_relative_eq!(ens.normalization, 0.058_898_688_987_252_1, max_relative = 1e-12);
        assert_relative_eq!(
            ensemble_fidelity(&ens, &target, &closure),
            0.978_082_608_896_005,
            max_relative = 1e-12
        );
    }

    #[test]
    fn mixture_collapses_toward_target() {
        let k = fig1_kernel();
        let target = target_squeeze(&k);
        let pf = PFunction::coherent_mixture(vec![(0.5, ONE), (0.5, -ONE)]).unwrap();
        let ens = evolve_ensemble(&k, &pf, 30, 8).unwrap();
        let closure = step_closure(&k, 30);
        for row in &ens.rows {
            assert!(row.label.alpha.norm() < 1e-4);
        }
        assert!(ensemble_fidelity(&ens, &target, &closure) > 1.0 - 1e-9);
    }

    #[test]
    fn thermal_quadrature_is_gated_and_converged() {
        let k = fig1_kernel();
        let pf = PFunction::thermal(0.5, Complex64::new(0.0, 0.0)).unwrap();
        let coarse = evolve_ensemble(&k, &pf, 3, 16).unwrap();
        let fine = evolve_ensemble(&k, &pf, 3, 32).unwrap();
        assert_relative_eq!(coarse.normalization, fine.normalization, max_relative = 1e-10);
        // Frozen from the truncated-basis oracle at D = 80.
        assert_relative_eq!(fine.normalization, 0.211_164_318_782_735, max_relative = 1e-8);
    }

    #[test]
    fn thermal_distills_too() {
        let k = fig1_kernel();
        let target = target_squeeze(&k);
        let pf = PFunction::thermal(0.5, Complex64::new(0.0, 0.0)).unwrap();
        let ens = evolve_ensemble(&k, &pf, 40, DEFAULT_ALPHA_QUAD_ORDER).unwrap();
        let closure = step_closure(&k, 40);
        assert!(ensemble_fidelity(&ens, &target, &closure) > 1.0 - 1e-9);
    }

    #[test]
    fn ensemble_quanta_match_oracle_reference() {
        let k = fig1_kernel();
        let pf = PFunction::thermal(0.5, Complex64::new(0.0, 0.0)).unwrap();
        let ens = evolve_ensemble(&k, &pf, 3, DEFAULT_ALPHA_QUAD_ORDER).unwrap();
        let closure = step_closure(&k, 3);
        assert_relative_eq!(
            ensemble_mean_quanta(&ens, &closure),
            0.571_097_834_068_476,
            max_relative = 1e-8
        );
        assert_relative_eq!(
            ensemble_fidelity(&ens, &target_squeeze(&k), &closure),
            0.954_345_367_543_075,
            max_relative = 1e-8
        );
    }
}
