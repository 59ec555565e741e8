//! Acceptance suite: every release criterion, one test each, with a
//! printed PASS/FAIL line (visible under `--nocapture`). The criterion
//! implementations live in [`zeno_distill::checks`] and are shared with
//! the `oracle-check` command.
//!
//! ```text
//! cargo test -p zeno-distill --test acceptance -- --nocapture
//! ```

mod common;

use common::reference_v80;
use zeno_distill::checks::{self, CheckConfig, CheckResult};
use zeno_distill::params::derive_kernel;

fn report(number: u8, result: &CheckResult) {
    println!(
        "criterion {number:02} {}: {} (tolerance {:.1e}, observed {:.3e}; {})",
        result.id,
        if result.passed { "PASS" } else { "FAIL" },
        result.tolerance,
        result.observed,
        result.detail
    );
    assert!(result.passed, "criterion {number:02} {} failed: {}", result.id, result.detail);
}

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

fn kernel() -> zeno_distill::params::ProjectedKernel {
    derive_kernel(&cfg().params).unwrap()
}

#[test]
fn criterion_01_propagator_factorization() {
    report(1, &checks::check_propagator_factorization(&cfg()));
}

#[test]
fn criterion_02_kernel_equivalence() {
    report(2, &checks::check_kernel_equivalence(&cfg(), &kernel(), reference_v80()));
}

#[test]
fn criterion_03_coherent_track_triple() {
    report(3, &checks::check_coherent_triple(&cfg(), &kernel(), reference_v80()));
}

#[test]
fn criterion_04_distillation_limit() {
    report(4, &checks::check_distillation_limit(&cfg(), &kernel()));
}

#[test]
fn criterion_05_mean_quanta_plateau() {
    report(5, &checks::check_mean_quanta_plateau(&cfg(), &kernel(), reference_v80()));
}

#[test]
fn criterion_06_free_oscillation() {
    report(6, &checks::check_free_oscillation(&cfg()));
}

#[test]
fn criterion_07_zeno_limit() {
    report(7, &checks::check_zeno_limit(&cfg()));
}

#[test]
fn criterion_08_interval_ordering() {
    report(8, &checks::check_interval_ordering(&cfg(), &kernel()));
}

#[test]
fn criterion_09_log_survival_curvature() {
    report(9, &checks::check_log_survival_curvature(&cfg(), &kernel()));
}

#[test]
fn criterion_10_thermal_track() {
    report(10, &checks::check_thermal_track(&cfg(), &kernel(), reference_v80()));
}

#[test]
fn criterion_11_dominant_mode() {
    report(11, &checks::check_dominant_mode(&cfg(), &kernel(), reference_v80()));
}
