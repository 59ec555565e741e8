//! System parameters, the single-measurement kernel and its fixed point.
//!
//! A free particle of mass m couples linearly to one bosonic mode of
//! frequency ω through g·p̂(â† + â). The particle starts in a Gaussian
//! wave packet of momentum width Δp₀ and is projected back onto that
//! packet every τ. Everything is computed in the three dimensionless
//! combinations
//!
//! ```text
//! τ̄ = ωτ,    ḡ = g√(m/ħω),    Δ̄_p = Δp₀/√(mħω).
//! ```
//!
//! Between confirmations the mode evolves under the projected operator
//! V̂ = ⟨Φ₀|Û(τ)|Φ₀⟩, a non-unitary contraction that is quadratic in â,
//! â†. Its entire action is fixed by four complex constants:
//!
//! ```text
//! M  = [1 + iΔ̄_p²τ̄(1 − 2ḡ²(1 − sin τ̄/τ̄))]^(-1/2)
//! G  = 2M²ḡ²Δ̄_p²(1 − cos τ̄)
//! q  = cos τ̄ + iG sin τ̄
//! q̃  = cos τ̄ + (i/G) sin τ̄
//! ```
//!
//! The two roots q ∓ √(q² − 1) are reciprocal; the one inside the unit
//! circle, λ, controls the decay of every N-step quantity. Repeated
//! measurement distills the mode into the squeezed vacuum |ξ⟩ with
//! ζ = G/(G q̃ + √(q² − 1)) on the λ-consistent branch, ξ = r·e^{iφ},
//! r = artanh|ζ|.
//!
//! Branch policy: √(q² − 1) is the principal square root, sign-flipped
//! when needed so that |q − √(q² − 1)| ≤ 1; the logarithm of λ is
//! principal. Only |M| is observable, so the principal-branch phase of M
//! is a recorded convention, not physics.

use num_complex::Complex64;

use crate::error::KernelError;

/// |G| below this is treated as exactly degenerate (no squeezing).
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// ||λ| − 1| below this is treated as gapless (marginal).
pub const MARGINALITY_THRESHOLD: f64 = 1e-12;

/// The three dimensionless knobs of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    tau_bar: f64,
    g_bar: f64,
    dp_bar: f64,
}

impl SystemParams {
    /// Validate and build a parameter triple.
    ///
    /// Requires τ̄ > 0, ḡ ≥ 0, Δ̄_p > 0, all finite.
    pub fn new(tau_bar: f64, g_bar: f64, dp_bar: f64) -> Result<Self, KernelError> {
        let bad = |reason: String| Err(KernelError::InvalidParams { reason });
        if !(tau_bar.is_finite() && g_bar.is_finite() && dp_bar.is_finite()) {
            return bad(format!(
                "non-finite entry in (tau_bar, g_bar, dp_bar) = ({tau_bar}, {g_bar}, {dp_bar})"
            ));
        }
        if tau_bar <= 0.0 {
            return bad(format!("tau_bar = {tau_bar} must be > 0"));
        }
        if g_bar < 0.0 {
            return bad(format!("g_bar = {g_bar} must be >= 0"));
        }
        if dp_bar <= 0.0 {
            return bad(format!("dp_bar = {dp_bar} must be > 0"));
        }
        Ok(SystemParams {
            tau_bar,
            g_bar,
            dp_bar,
        })
    }

    /// Measurement interval τ̄ = ωτ.
    pub fn tau_bar(&self) -> f64 {
        self.tau_bar
    }

    /// Coupling ḡ = g√(m/ħω).
    pub fn g_bar(&self) -> f64 {
        self.g_bar
    }

    /// Probe momentum width Δ̄_p = Δp₀/√(mħω).
    pub fn dp_bar(&self) -> f64 {
        self.dp_bar
    }

    /// Same couplings, different measurement interval.
    pub fn with_tau_bar(&self, tau_bar: f64) -> Result<Self, KernelError> {
        SystemParams::new(tau_bar, self.g_bar, self.dp_bar)
    }
}

/// sin(x)/x with the removable singularity filled in.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// (M, G) at an arbitrary elapsed phase t̄ ≥ 0.
///
/// Shared by the kernel derivation (t̄ = τ̄) and the no-measurement
/// baseline (t̄ = ωt). 1 − cos t̄ is evaluated as 2 sin²(t̄/2) so small
/// intervals do not cancel.
pub(crate) fn norm_and_squeeze(g_bar: f64, dp_bar: f64, t_bar: f64) -> (Complex64, Complex64) {
    let x = dp_bar * dp_bar * t_bar * (1.0 - 2.0 * g_bar * g_bar * (1.0 - sinc(t_bar)));
    let m = Complex64::new(1.0, x).sqrt().inv();
    let half = (t_bar / 2.0).sin();
    let g = 2.0 * m * m * g_bar * g_bar * dp_bar * dp_bar * (2.0 * half * half);
    (m, g)
}

/// Spectral classification of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRegime {
    /// |λ| < 1 strictly: a unique dominant eigenvector, distillation
    /// converges geometrically.
    Distilling,
    /// |λ| = 1: no gap. [`derive_kernel`] reports this as an error.
    Marginal,
    /// G = 0: no squeezing at all. Also reported as an error.
    Degenerate,
}

/// The single-step measurement kernel constants.
///
/// Successful construction implies `regime == Distilling`; the marginal
/// and degenerate classifications surface as [`KernelError`] instead, so
/// every downstream closed form may assume a strict eigenvalue gap.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedKernel {
    params: SystemParams,
    /// Normalization factor M (principal-branch phase convention).
    pub norm: Complex64,
    /// Squeeze strength G.
    pub squeeze: Complex64,
    /// q = cos τ̄ + iG sin τ̄.
    pub q: Complex64,
    /// q̃ = cos τ̄ + (i/G) sin τ̄.
    pub q_tilde: Complex64,
    /// The branch w of √(q² − 1) for which |q − w| ≤ 1.
    pub root: Complex64,
    /// Decaying root λ = q − w, |λ| ≤ 1.
    pub decay_root: Complex64,
    /// Principal logarithm of λ.
    pub log_decay_root: Complex64,
    pub regime: KernelRegime,
}

impl ProjectedKernel {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }
}

/// Evaluate the kernel constants and pick the decaying branch.
pub fn derive_kernel(params: &SystemParams) -> Result<ProjectedKernel, KernelError> {
    let (tau, g_bar, dp_bar) = (params.tau_bar, params.g_bar, params.dp_bar);
    let (norm, squeeze) = norm_and_squeeze(g_bar, dp_bar, tau);
    if squeeze.norm() < DEGENERACY_THRESHOLD {
        return Err(KernelError::Degenerate {
            g_magnitude: squeeze.norm(),
        });
    }

    let (cos_t, sin_t) = (tau.cos(), tau.sin());
    let q = Complex64::new(cos_t, 0.0) + Complex64::i() * squeeze * sin_t;
    let q_tilde = Complex64::new(cos_t, 0.0) + Complex64::i() * squeeze.inv() * sin_t;

    let mut root = (q * q - Complex64::new(1.0, 0.0)).sqrt();
    let mut decay_root = q - root;
    if decay_root.norm() > 1.0 {
        root = -root;
        decay_root = q - root;
    }
    if (decay_root.norm() - 1.0).abs() < MARGINALITY_THRESHOLD {
        return Err(KernelError::Marginal {
            lambda_magnitude: decay_root.norm(),
        });
    }

    Ok(ProjectedKernel {
        params: *params,
        norm,
        squeeze,
        q,
        q_tilde,
        root,
        decay_root,
        log_decay_root: decay_root.ln(),
        regime: KernelRegime::Distilling,
    })
}

/// The distillation fixed point: squeezed vacuum |ξ⟩, ξ = r·e^{iφ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSqueeze {
    /// ζ = e^{iφ} tanh r, |ζ| < 1.
    pub zeta: Complex64,
    /// r = artanh|ζ| ≥ 0.
    pub r: f64,
    /// φ = arg ζ in (−π, π].
    pub phi: f64,
}

impl TargetSqueeze {
    /// ξ = r·e^{iφ}.
    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    /// Mean quantum number sinh²r of the squeezed vacuum.
    pub fn mean_quanta(&self) -> f64 {
        let s = self.r.sinh();
        s * s
    }
}

/// Asymptotic squeeze of the distilled state.
///
/// ζ = G/(G q̃ + w) with the λ-consistent branch w; this is the N → ∞
/// limit of the N-step squeeze ζ_N and one of the two roots
/// q̃ ∓ √(q̃² − 1) of the fixed-point quadratic.
pub fn target_squeeze(kernel: &ProjectedKernel) -> TargetSqueeze {
    let zeta = kernel.squeeze / (kernel.squeeze * kernel.q_tilde + kernel.root);
    debug_assert!(zeta.norm() < 1.0, "distilling kernel must squeeze inside the disc");
    TargetSqueeze {
        zeta,
        r: zeta.norm().atanh(),
        phi: zeta.arg(),
    }
}


#[cfg(test)]
pub(crate) use tests::fig1_params;
