//! Error types shared across the crate.

use thiserror::Error;

/// Failures while validating parameters or deriving the measurement kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    /// Parameter triple violates its domain (non-finite, τ̄ ≤ 0, ...).
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },

    /// G vanishes (e.g. ḡ = 0 or cos τ̄ = 1). The kernel carries no
    /// squeezing, q̃ = cos τ̄ + (i/G) sin τ̄ is undefined and the
    /// distillation machinery does not apply.
    #[error("degenerate kernel: |G| = {g_magnitude:.3e} below 1e-14, squeezing strength vanishes")]
    Degenerate { g_magnitude: f64 },

    /// |λ| = 1 within 1e-12: the two roots of q² − 1 have equal modulus,
    /// there is no eigenvalue gap and the N-step closed forms divide by a
    /// vanishing quantity.
    #[error("marginal kernel: |lambda| = {lambda_magnitude} has no gap to 1, distillation does not converge")]
    Marginal { lambda_magnitude: f64 },
}

/// Failures of the phase-space quadrature layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    /// Doubling the quadrature order moved the result by more than the
    /// stated gate, or the integrand has a non-decaying tail.
    #[error("quadrature not converged at order {order}: {detail}")]
    QuadratureNotConverged { order: usize, detail: String },

    /// Mixture weights not positive / not normalized, thermal n̄ ≤ 0, ...
    #[error("invalid P-function: {reason}")]
    InvalidPFunction { reason: String },
}

/// Failures of the truncated Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    /// The truncation dimension cannot support the requested operator or
    /// state: a unitarity defect or occupation leak exceeded its gate.
    #[error("truncation too small at dim {dim}: {context} = {defect:.3e}")]
    TruncationTooSmall {
        dim: usize,
        defect: f64,
        context: &'static str,
    },

    /// Momentum quadrature for the projected kernel did not stabilize
    /// under order doubling.
    #[error("momentum quadrature not converged: corner moved by {change:.3e} at order {order} -> {doubled}")]
    QuadratureNotConverged {
        order: usize,
        doubled: usize,
        change: f64,
    },

    /// |μ₁| − |μ₂| below gate: dominant eigenvector is not isolated.
    #[error("eigenvalue gap too small: {gap:.3e}")]
    GapTooSmall { gap: f64 },

    /// Power iteration failed to reach its residual target.
    #[error("eigenvalue iteration did not converge (residual {residual:.3e})")]
    NotConverged { residual: f64 },
}
