//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use std::sync::OnceLock;

use zeno_distill::fock::{projected_v_matrix, FockMatrix};
use zeno_distill::params::{derive_kernel, ProjectedKernel, SystemParams};

/// Reference parameter point used throughout: τ̄ = 0.9π, ḡ = 1, Δ̄_p = 0.4.
pub fn reference_params() -> SystemParams {
    SystemParams::new(0.9 * std::f64::consts::PI, 1.0, 0.4).unwrap()
}

pub fn reference_kernel() -> ProjectedKernel {
    derive_kernel(&reference_params()).unwrap()
}

/// The oracle kernel at D = 80, momentum quadrature order 64, built once
/// per test binary.
pub fn reference_v80() -> &'static FockMatrix {
    static V: OnceLock<FockMatrix> = OnceLock::new();
    V.get_or_init(|| projected_v_matrix(&reference_params(), 80, 64).expect("reference V"))
}
