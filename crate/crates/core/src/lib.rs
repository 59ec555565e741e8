//! Exact dynamics of a bosonic mode under repeated partial projective
//! measurements of a coupled particle.
//!
//! A free particle couples linearly to a single field mode. The particle
//! starts in a Gaussian wave packet and is projected back onto it every
//! interval τ̄; the mode is never measured. Conditioned on all
//! projections succeeding, the mode evolves by powers of a non-unitary
//! contraction V̂ whose action has closed form for every step count N.
//! Three regimes fall out of the same formulas:
//!
//! * **Distillation** (fixed τ̄, growing N): the mode converges to the
//!   squeezed vacuum spanned by V̂'s dominant eigenvector, from any
//!   initial state, while the survival probability decays.
//! * **Measurement freezing** (fixed total time t̄ = Nτ̄, N → ∞): the
//!   survival probability returns to 1 and the mode simply rotates —
//!   frequent projection confines the dynamics to the probe's subspace.
//! * **Accelerated decay** at long intervals: survival under repeated
//!   measurement drops below the measurement-free baseline.
//!
//! Module map:
//!
//! * [`params`] — dimensionless parameters, kernel constants, branch
//!   choices, the target squeeze.
//! * [`iterates`] — overflow-free N-step closed forms (ζ_N, κ_N) and
//!   the coherent-amplitude map (α_N, ln M_N).
//! * [`coherent`] — survival, fidelity, mean quanta, distillation and
//!   Zeno series for an initial coherent state.
//! * [`pfunc`] — the same machinery for initial states given as a
//!   diagonal coherent-state mixture (point masses, thermal Gaussian).
//! * [`free`] — the no-measurement baseline.
//! * [`fock`] — an independent truncated-basis oracle that rebuilds
//!   every claim by dense linear algebra.
//! * [`quad`] — Gauss–Hermite rules used by both sides.
//!
//! The crate deliberately computes everything twice: closed forms in
//! log-space where probabilities underflow, and brute force in a
//! truncated number basis with explicit truncation gates. The test
//! suites hold the two routes together.

pub mod checks;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod free;
pub mod iterates;
pub mod params;
pub mod pfunc;
pub mod quad;

pub use coherent::{
    coherent_fidelity, distill_series, fidelity_to_target, mean_quanta, squeezed_vacuum_fidelity,
    survival_log_prob, zeno_series, DistillRecord, SqueezedCoherentLabel, ZenoPoint, ZenoRecord,
};
pub use error::{EnsembleError, FockError, KernelError};
pub use iterates::{propagate_amplitude, step_closure, AmplitudeImage, StepClosure};
pub use params::{
    derive_kernel, target_squeeze, KernelRegime, ProjectedKernel, SystemParams, TargetSqueeze,
};
pub use pfunc::{
    ensemble_fidelity, ensemble_mean_quanta, evolve_ensemble, EnsembleRow, FieldEnsemble,
    PFunction,
};
