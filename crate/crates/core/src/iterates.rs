//! Exact N-step closed forms, in overflow-free shape.
//!
//! The N-th power of the measurement kernel factorizes as
//!
//! ```text
//! V̂^N = M^N · e^{-ζ_N â†²/2} · e^{-κ_N(â†â + 1/2)} · e^{-ζ_N â²/2}
//! ```
//!
//! with ζ_N, κ_N rational in λ^N where λ is the decaying root. Written
//! with coth/cosh/sinh of N·ln λ these overflow for modest N, so
//! everything here is expressed through Λ = λ^{2N} (which decays to zero)
//! plus an explicit −N·ln λ term kept additive inside κ_N:
//!
//! ```text
//! ζ_N = G(Λ-1) / [G q̃ (Λ-1) − w(1+Λ)]
//! κ_N = −N ln λ + ln[ (1+Λ)/2 − (G q̃/w)(Λ-1)/2 ]
//! ```
//!
//! Applied to a coherent state |α⟩ the factorization gives a squeezed
//! coherent state with label (α_N, ξ_N) and a scalar prefactor M_N(α)
//! that is carried only as a logarithm: N·ln M would underflow any
//! linear representation long before the closed forms lose meaning.

use num_complex::Complex64;

use crate::params::ProjectedKernel;

/// N-step factorization parameters.
///
/// Only produced from a distilling kernel, so |ζ_N| < 1 and the
/// logarithms below are finite for every N ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepClosure {
    pub n_steps: u32,
    /// N-step squeeze ζ_N = e^{iφ_N} tanh r_N.
    pub zeta_n: Complex64,
    /// N-step contraction exponent; Re κ_N grows linearly in N.
    pub kappa_n: Complex64,
    /// r_N = artanh|ζ_N|.
    pub r_n: f64,
    /// φ_N = arg ζ_N.
    pub phi_n: f64,
    /// N·ln M, the accumulated single-step normalization.
    pub log_norm_pow: Complex64,
}

impl StepClosure {
    /// Squeeze label ξ_N = r_N e^{iφ_N}.
    pub fn xi_n(&self) -> Complex64 {
        Complex64::from_polar(self.r_n, self.phi_n)
    }
}

/// Amplitude map of one coherent-state label through N measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeImage {
    /// Displacement label after N steps.
    pub alpha_n: Complex64,
    /// ln M_N(α); twice its real part is the log survival probability.
    pub log_norm: Complex64,
}

/// Evaluate (ζ_N, κ_N, ξ_N) for N ≥ 1.
pub fn step_closure(kernel: &ProjectedKernel, n_steps: u32) -> StepClosure {
    assert!(n_steps >= 1, "closed forms start at N = 1");
    let n = f64::from(n_steps);
    let g = kernel.squeeze;
    let qt = kernel.q_tilde;
    let w = kernel.root;

    // Λ = λ^{2N} underflows cleanly to 0 for large N since |λ| < 1.
    let big_lambda = (2.0 * n * kernel.log_decay_root).exp();
    let shrink = big_lambda - 1.0;
    let grow = big_lambda + 1.0;

    let zeta_n = g * shrink / (g * qt * shrink - w * grow);
    let kappa_n = -n * kernel.log_decay_root + (grow / 2.0 - (g * qt / w) * shrink / 2.0).ln();

    StepClosure {
        n_steps,
        zeta_n,
        kappa_n,
        r_n: zeta_n.norm().atanh(),
        phi_n: zeta_n.arg(),
        log_norm_pow: n * kernel.norm.ln(),
    }
}

/// Map a coherent label α through the N-step closure.
///
/// ```text
/// α_N      = (α e^{-κ_N} − α* ζ_N e^{-κ_N*}) cosh²r_N
/// ln M_N(α) = N ln M + ln(cosh r_N)/2
///           − [κ_N + |α|²(1 − e^{-2Re κ_N} cosh²r_N)
///                  + α²(ζ_N + ζ_N* e^{-2κ_N} cosh²r_N)]/2
/// ```
pub fn propagate_amplitude(closure: &StepClosure, alpha: Complex64) -> AmplitudeImage {
    let cosh_r = closure.r_n.cosh();
    let cosh2 = cosh_r * cosh_r;
    let decay = (-closure.kappa_n).exp();
    let decay_conj = (-closure.kappa_n.conj()).exp();
    let alpha_n = (alpha * decay - alpha.conj() * closure.zeta_n * decay_conj) * cosh2;

    let damp_sq = (-2.0 * closure.kappa_n.re).exp();
    let decay_sq = (-2.0 * closure.kappa_n).exp();
    let amp2 = Complex64::new(alpha.norm_sqr() * (1.0 - damp_sq * cosh2), 0.0);
    let phase2 = alpha * alpha * (closure.zeta_n + closure.zeta_n.conj() * decay_sq * cosh2);
    let log_norm = closure.log_norm_pow + Complex64::new(cosh_r.ln() / 2.0, 0.0)
        - (closure.kappa_n + amp2 + phase2) / 2.0;

    AmplitudeImage { alpha_n, log_norm }
}
