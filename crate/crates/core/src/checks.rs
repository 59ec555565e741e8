//! The cross-validation suite: every release criterion as a callable
//! check, shared by the acceptance test target and the command-line
//! `oracle-check` report.
//!
//! Each check compares a closed-form route against an independent one
//! (usually the Fock oracle) at a pinned tolerance and returns what it
//! measured. Checks never panic on physics: gate trips and kernel
//! failures come back as failed results carrying the error text.

use num_complex::Complex64;

use crate::coherent::{fidelity_to_target, mean_quanta, survival_log_prob, zeno_series};
use crate::error::{FockError, KernelError};
use crate::fock::{
    certified_diff_norm, closure_matrix, coherent_state, dominant_mode, number_matrix,
    oracle_observables, projected_v_matrix, squeezed_vacuum_state, thermal_density, u_p_exact,
    u_p_factored, FockMatrix,
};
use crate::free::{free_mean_quanta, free_survival};
use crate::iterates::step_closure;
use crate::params::{derive_kernel, target_squeeze, ProjectedKernel, SystemParams};
use crate::pfunc::{ensemble_fidelity, ensemble_mean_quanta, evolve_ensemble, PFunction};
use crate::quad::GaussHermite;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Knobs of the suite. Defaults are the reference point the library is
/// demonstrated at; shrinking `fock_dim` or the quadrature orders is the
/// supported way to watch the truncation and convergence gates trip.
#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub params: SystemParams,
    pub alpha0: Complex64,
    pub fock_dim: usize,
    pub p_quad_order: usize,
    pub alpha_quad_order: usize,
    /// Dimension for the propagator-factorization grid (heavier states
    /// than the kernel checks, hence larger).
    pub propagator_dim: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            params: SystemParams::new(0.9 * std::f64::consts::PI, 1.0, 0.4)
                .expect("reference parameters are valid"),
            alpha0: ONE,
            fock_dim: 80,
            p_quad_order: 64,
            alpha_quad_order: 32,
            propagator_dim: 120,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: &'static str,
    pub tolerance: f64,
    /// The quantity the tolerance bounds (worst error, margin, ...).
    pub observed: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn measured(id: &'static str, tolerance: f64, observed: f64, detail: String) -> Self {
        CheckResult {
            id,
            tolerance,
            observed,
            passed: observed <= tolerance,
            detail,
        }
    }

    fn gated(id: &'static str, tolerance: f64, error: &FockError) -> Self {
        CheckResult {
            id,
            tolerance,
            observed: f64::NAN,
            passed: false,
            detail: format!("oracle unavailable: {error}"),
        }
    }
}

/// 1. Factored vs directly-exponentiated momentum-conditioned
/// propagators: operator-norm agreement ≤ 1e-8 on the truncation-
/// certified interior block over p̄ ∈ {0, ±0.5, ±1, ±2},
/// t̄ ∈ {0.3, 0.9π, 2.5}. The certified block must keep a meaningful
/// size (≥ 20 levels) for the comparison to count.
pub fn check_propagator_factorization(cfg: &CheckConfig) -> CheckResult {
    const ID: &str = "propagator-factorization";
    const TOL: f64 = 1e-8;
    let dim = cfg.propagator_dim;
    let mut worst = 0.0_f64;
    let mut min_block = usize::MAX;
    for t_bar in [0.3, 0.9 * std::f64::consts::PI, 2.5] {
        for p_bar in [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0] {
            let exact = match u_p_exact(&cfg.params, p_bar, t_bar, dim) {
                Ok(u) => u,
                Err(e) => return CheckResult::gated(ID, TOL, &e),
            };
            let factored = match u_p_factored(&cfg.params, p_bar, t_bar, dim) {
                Ok(u) => u,
                Err(e) => return CheckResult::gated(ID, TOL, &e),
            };
            let (block, norm) = certified_diff_norm(&exact, &factored, 1e-18);
            worst = worst.max(norm);
            min_block = min_block.min(block);
        }
    }
    let mut result = CheckResult::measured(
        ID,
        TOL,
        worst,
        format!("worst certified-block operator norm at D = {dim}; smallest block {min_block}"),
    );
    if min_block < 20 {
        result.passed = false;
        result.detail = format!("certified block shrank to {min_block} levels at D = {dim}");
    }
    result
}

/// 2. ⟨m|V̂^N|n⟩ from the closed-form factorization vs the N-th matrix
/// power of the quadrature-built kernel: entrywise ≤ 1e-8 for
/// m, n ≤ 20, N ≤ 10.
pub fn check_kernel_equivalence(
    _cfg: &CheckConfig,
    kernel: &ProjectedKernel,
    v: &FockMatrix,
) -> CheckResult {
    const ID: &str = "kernel-equivalence";
    const TOL: f64 = 1e-8;
    let dim = v.nrows();
    let corner = 20.min(dim - 1);
    let mut power = FockMatrix::identity(dim, dim);
    let mut worst = 0.0_f64;
    for n in 1..=10_u32 {
        power = &power * v;
        let closed = closure_matrix(&step_closure(kernel, n), dim);
        for m in 0..=corner {
            for j in 0..=corner {
                worst = worst.max((power[(m, j)] - closed[(m, j)]).norm());
            }
        }
    }
    CheckResult::measured(
        ID,
        TOL,
        worst,
        format!("worst entrywise gap, m,n ≤ {corner}, N ≤ 10"),
    )
}

/// 3. Survival, target fidelity and mean quanta from closed forms vs
/// the oracle iteration: relative error ≤ 1e-6 for α₀ ∈ {0, 1, 2},
/// N = 1..10.
pub fn check_coherent_triple(
    _cfg: &CheckConfig,
    kernel: &ProjectedKernel,
    v: &FockMatrix,
) -> CheckResult {
    const ID: &str = "coherent-track-triple";
    const TOL: f64 = 1e-6;
    let dim = v.nrows();
    let target = target_squeeze(kernel);
    let (xi_vec, _) = squeezed_vacuum_state(target.zeta, dim);
    let mut worst = 0.0_f64;
    for alpha0 in [ZERO, ONE, Complex64::new(2.0, 0.0)] {
        let (state, _) = coherent_state(alpha0, dim);
        let rho0 = &state * state.adjoint();
        let steps = match oracle_observables(v, &rho0, &xi_vec, 10) {
            Ok(s) => s,
            Err(e) => return CheckResult::gated(ID, TOL, &e),
        };
        for n in 1..=10_u32 {
            let oracle = steps[n as usize];
            let p = survival_log_prob(kernel, alpha0, n).exp();
            let f = fidelity_to_target(kernel, alpha0, n);
            let q = mean_quanta(kernel, alpha0, n);
            worst = worst.max((p - oracle.survival).abs() / oracle.survival);
            worst = worst.max((f - oracle.fidelity).abs() / oracle.fidelity);
            worst = worst.max((q - oracle.mean_quanta).abs() / oracle.mean_quanta);
        }
    }
    CheckResult::measured(ID, TOL, worst, "worst relative error over α₀ ∈ {0,1,2}, N ≤ 10".into())
}

/// 4. Distillation limit: fidelity ≥ 0.99 within 100 steps and the
/// squeeze gap decays geometrically at ratio |λ|² (fit within 10% over
/// N = 5..50).
pub fn check_distillation_limit(cfg: &CheckConfig, kernel: &ProjectedKernel) -> CheckResult {
    const ID: &str = "distillation-limit";
    const TOL: f64 = 0.10;
    let target = target_squeeze(kernel);
    let first_high = (1..=100_u32).find(|&n| fidelity_to_target(kernel, cfg.alpha0, n) >= 0.99);

    let mut points = Vec::new();
    for n in 5..=50_u32 {
        let gap = (step_closure(kernel, n).zeta_n - target.zeta).norm();
        if gap > 1e-14 * target.zeta.norm() {
            points.push((f64::from(n), gap.ln()));
        }
    }
    if points.len() < 8 {
        return CheckResult {
            id: ID,
            tolerance: TOL,
            observed: f64::NAN,
            passed: false,
            detail: format!("only {} usable gap points for the rate fit", points.len()),
        };
    }
    let len = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / len;
    let slope: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>()
        / points.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    let fitted = slope.exp();
    let expected = kernel.decay_root.norm_sqr();
    let deviation = (fitted - expected).abs() / expected;

    let mut result = CheckResult::measured(
        ID,
        TOL,
        deviation,
        format!(
            "fitted ratio {fitted:.6} vs |λ|² = {expected:.6}; F ≥ 0.99 first at N = {first_high:?}"
        ),
    );
    if first_high.is_none() {
        result.passed = false;
    }
    result
}

/// 5. Mean-quanta plateau: closed-form ⟨â†â⟩ at N = 200 within 1e-3 of
/// the number expectation of the oracle's dominant eigenvector.
pub fn check_mean_quanta_plateau(
    cfg: &CheckConfig,
    kernel: &ProjectedKernel,
    v: &FockMatrix,
) -> CheckResult {
    const ID: &str = "mean-quanta-plateau";
    const TOL: f64 = 1e-3;
    let mode = match dominant_mode(v) {
        Ok(m) => m,
        Err(e) => return CheckResult::gated(ID, TOL, &e),
    };
    let nmat = number_matrix(v.nrows());
    let plateau =
        (mode.vector.adjoint() * &nmat * &mode.vector)[(0, 0)].re / mode.vector.norm_squared();
    let mut worst = 0.0_f64;
    for alpha0 in [ZERO, cfg.alpha0] {
        worst = worst.max((mean_quanta(kernel, alpha0, 200) - plateau).abs());
    }
    CheckResult::measured(
        ID,
        TOL,
        worst,
        format!("deviation from the oracle plateau {plateau:.9} at N = 200"),
    )
}

/// 6. Baseline mean quanta: closed form vs an independent quadrature of
/// its defining phase-space integral, ≤ 1e-10 over 100 random draws.
pub fn check_free_oscillation(_cfg: &CheckConfig) -> CheckResult {
    const ID: &str = "free-oscillation";
    const TOL: f64 = 1e-10;
    let mut rng = SplitMix::new(0x5eed_cafe);
    let rule = GaussHermite::new(24);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let params = SystemParams::new(
            rng.range(0.05, 6.0),
            rng.range(0.0, 2.0),
            rng.range(0.05, 1.5),
        )
        .expect("sampled parameters are valid");
        let t_bar = rng.range(0.0, 12.0);
        let nbar = rng.range(0.05, 3.0);
        let center = Complex64::new(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
        let pfunc = PFunction::thermal(nbar, center).expect("nbar > 0");

        let closed = free_mean_quanta(&params, &pfunc, t_bar);
        let kick = 4.0
            * params.g_bar().powi(2)
            * params.dp_bar().powi(2)
            * (t_bar / 2.0).sin().powi(2);
        let scale = nbar.sqrt();
        let inv_pi = 1.0 / std::f64::consts::PI;
        let mut integral = 0.0;
        for (&xj, &wj) in rule.nodes().iter().zip(rule.weights()) {
            for (&xl, &wl) in rule.nodes().iter().zip(rule.weights()) {
                let alpha = center + scale * Complex64::new(xj, xl);
                integral += wj * wl * inv_pi * (alpha.norm_sqr() + kick);
            }
        }
        worst = worst.max((closed - integral).abs());
    }
    CheckResult::measured(ID, TOL, worst, "worst |closed − quadrature| over 100 draws".into())
}

/// 7. Frequent-measurement freezing at t̄ = 0.9π: 1 − P strictly falls
/// along N = 2⁴..2¹², ends ≤ 1e-3, and the state reaches the rotated
/// coherent target with fidelity ≥ 0.999.
pub fn check_zeno_limit(cfg: &CheckConfig) -> CheckResult {
    const ID: &str = "zeno-limit";
    const TOL: f64 = 1e-3;
    let t_bar = 0.9 * std::f64::consts::PI;
    let steps: Vec<u32> = (4..=12).map(|k| 1u32 << k).collect();
    let rows = zeno_series(cfg.params.g_bar(), cfg.params.dp_bar(), t_bar, cfg.alpha0, &steps);
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    let mut last_miss = f64::NAN;
    let mut last_fid = f64::NAN;
    for row in &rows {
        let point = match &row.outcome {
            Ok(p) => p,
            Err(e) => {
                return CheckResult {
                    id: ID,
                    tolerance: TOL,
                    observed: f64::NAN,
                    passed: false,
                    detail: format!("kernel failed at N = {}: {e}", row.n_steps),
                }
            }
        };
        let miss = -point.log_survival.exp_m1();
        if miss >= prev {
            monotone = false;
        }
        prev = miss;
        last_miss = miss;
        last_fid = point.rotated_fidelity;
    }
    let mut result = CheckResult::measured(
        ID,
        TOL,
        last_miss,
        format!("1 − P at N = 4096; monotone decline {monotone}, rotated fidelity {last_fid:.6}"),
    );
    if !monotone || last_fid < 0.999 {
        result.passed = false;
    }
    result
}

/// 8. Interval ordering: some N ≤ 10 at τ̄ = 0.9π decays below the
/// measurement-free baseline, while at τ̄ = 0.0045π repeated measurement
/// stays at or above it out to Nτ̄ = 3π (N = 1 equality to rounding).
pub fn check_interval_ordering(cfg: &CheckConfig, kernel: &ProjectedKernel) -> CheckResult {
    const ID: &str = "interval-ordering";
    const TOL: f64 = 1e-12;
    let pfunc = PFunction::delta(cfg.alpha0);
    let tau_long = cfg.params.tau_bar();
    let accelerated = (1..=10_u32).any(|n| {
        let p = survival_log_prob(kernel, cfg.alpha0, n).exp();
        let p0 = free_survival(&cfg.params, &pfunc, f64::from(n) * tau_long)
            .expect("point-mass baseline is closed form");
        p < p0
    });

    let tau_short = 0.0045 * std::f64::consts::PI;
    let short_kernel = match cfg
        .params
        .with_tau_bar(tau_short)
        .and_then(|p| derive_kernel(&p))
    {
        Ok(k) => k,
        Err(e) => {
            return CheckResult {
                id: ID,
                tolerance: TOL,
                observed: f64::NAN,
                passed: false,
                detail: format!("short-interval kernel failed: {e}"),
            }
        }
    };
    let n_max = (3.0 * std::f64::consts::PI / tau_short) as u32;
    let mut min_margin = f64::INFINITY;
    for n in 1..=n_max {
        let p = survival_log_prob(&short_kernel, cfg.alpha0, n).exp();
        let p0 = free_survival(&cfg.params, &pfunc, f64::from(n) * tau_short)
            .expect("point-mass baseline is closed form");
        min_margin = min_margin.min(p - p0);
    }
    let mut result = CheckResult::measured(
        ID,
        TOL,
        (-min_margin).max(0.0),
        format!(
            "short-τ̄ worst baseline shortfall over N ≤ {n_max}; long-τ̄ acceleration seen: {accelerated}"
        ),
    );
    if !accelerated {
        result.passed = false;
    }
    result
}

/// 9. Non-exponential decay: max |Δ² ln P| over N ≤ 20 strictly grows
/// along α₀ ∈ {0, 2, 4}.
pub fn check_log_survival_curvature(
    _cfg: &CheckConfig,
    kernel: &ProjectedKernel,
) -> CheckResult {
    const ID: &str = "log-survival-curvature";
    let mut maxima = Vec::new();
    for a in [0.0, 2.0, 4.0] {
        let lnp: Vec<f64> = (1..=21_u32)
            .map(|n| survival_log_prob(kernel, Complex64::new(a, 0.0), n))
            .collect();
        let max_curv = lnp
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
            .fold(0.0, f64::max);
        maxima.push(max_curv);
    }
    let increasing = maxima[0] < maxima[1] && maxima[1] < maxima[2] && maxima[0] > 0.0;
    CheckResult {
        id: ID,
        tolerance: 0.0,
        observed: if increasing { 0.0 } else { 1.0 },
        passed: increasing,
        detail: format!(
            "max |Δ²lnP| = {:.4e} | {:.4e} | {:.4e} for α₀ = 0, 2, 4",
            maxima[0], maxima[1], maxima[2]
        ),
    }
}

/// 10. Thermal track: phase-space observables vs the oracle's thermal
/// iteration ≤ 1e-4 relative for N = 1..5, with order-doubling drift
/// ≤ 1e-8.
pub fn check_thermal_track(
    cfg: &CheckConfig,
    kernel: &ProjectedKernel,
    v: &FockMatrix,
) -> CheckResult {
    const ID: &str = "thermal-track";
    const TOL: f64 = 1e-4;
    const GATE: f64 = 1e-8;
    let dim = v.nrows();
    let nbar = 0.5;
    let pfunc = PFunction::thermal(nbar, ZERO).expect("nbar > 0");
    let target = target_squeeze(kernel);
    let (xi_vec, _) = squeezed_vacuum_state(target.zeta, dim);
    let rho0 = thermal_density(nbar, dim);
    let steps = match oracle_observables(v, &rho0, &xi_vec, 5) {
        Ok(s) => s,
        Err(e) => return CheckResult::gated(ID, TOL, &e),
    };

    let mut worst_rel = 0.0_f64;
    let mut worst_gate = 0.0_f64;
    for n in 1..=5_u32 {
        let closure = step_closure(kernel, n);
        let evolved = |order: usize| evolve_ensemble(kernel, &pfunc, n, order);
        let (coarse, fine) = match (evolved(cfg.alpha_quad_order), evolved(2 * cfg.alpha_quad_order)) {
            (Ok(c), Ok(f)) => (c, f),
            (Err(e), _) | (_, Err(e)) => {
                return CheckResult {
                    id: ID,
                    tolerance: TOL,
                    observed: f64::NAN,
                    passed: false,
                    detail: format!("phase-space quadrature failed: {e}"),
                }
            }
        };
        let oracle = steps[n as usize];
        let p = coarse.normalization;
        let f = ensemble_fidelity(&coarse, &target, &closure);
        let q = ensemble_mean_quanta(&coarse, &closure);
        worst_rel = worst_rel.max((p - oracle.survival).abs() / oracle.survival);
        worst_rel = worst_rel.max((f - oracle.fidelity).abs() / oracle.fidelity);
        worst_rel = worst_rel.max((q - oracle.mean_quanta).abs() / oracle.mean_quanta);
        worst_gate =
            worst_gate.max((p - fine.normalization).abs() / fine.normalization);
        worst_gate = worst_gate.max((f - ensemble_fidelity(&fine, &target, &closure)).abs());
        worst_gate = worst_gate.max((q - ensemble_mean_quanta(&fine, &closure)).abs());
    }
    let mut result = CheckResult::measured(
        ID,
        TOL,
        worst_rel,
        format!("worst oracle gap (n̄ = {nbar}, N ≤ 5); order-doubling drift {worst_gate:.3e}"),
    );
    if worst_gate > GATE {
        result.passed = false;
    }
    result
}

/// 11. Dominant mode: strictly positive modulus gap and eigenvector
/// overlap ≥ 1 − 1e-6 with the predicted squeezed vacuum.
pub fn check_dominant_mode(
    _cfg: &CheckConfig,
    kernel: &ProjectedKernel,
    v: &FockMatrix,
) -> CheckResult {
    const ID: &str = "dominant-mode";
    const TOL: f64 = 1e-6;
    let target = target_squeeze(kernel);
    let mode = match dominant_mode(v) {
        Ok(m) => m,
        Err(e) => return CheckResult::gated(ID, TOL, &e),
    };
    let (xi_vec, _) = squeezed_vacuum_state(target.zeta, v.nrows());
    let overlap = mode.vector.dotc(&xi_vec).norm() / (mode.vector.norm() * xi_vec.norm());
    CheckResult::measured(
        ID,
        TOL,
        1.0 - overlap,
        format!("eigenvector overlap deficit; modulus gap {:.6}", mode.gap),
    )
}

/// Run the whole suite. Fails fast only when the kernel itself cannot
/// be derived (degenerate or marginal parameters); oracle gate trips
/// show up as failed rows instead.
pub fn run_all(cfg: &CheckConfig) -> Result<Vec<CheckResult>, KernelError> {
    let kernel = derive_kernel(&cfg.params)?;
    let v = projected_v_matrix(&cfg.params, cfg.fock_dim, cfg.p_quad_order);

    let mut out = Vec::with_capacity(11);
    out.push(check_propagator_factorization(cfg));
    match &v {
        Ok(v) => {
            out.push(check_kernel_equivalence(cfg, &kernel, v));
            out.push(check_coherent_triple(cfg, &kernel, v));
        }
        Err(e) => {
            out.push(CheckResult::gated("kernel-equivalence", 1e-8, e));
            out.push(CheckResult::gated("coherent-track-triple", 1e-6, e));
        }
    }
    out.push(check_distillation_limit(cfg, &kernel));
    match &v {
        Ok(v) => out.push(check_mean_quanta_plateau(cfg, &kernel, v)),
        Err(e) => out.push(CheckResult::gated("mean-quanta-plateau", 1e-3, e)),
    }
    out.push(check_free_oscillation(cfg));
    out.push(check_zeno_limit(cfg));
    out.push(check_interval_ordering(cfg, &kernel));
    out.push(check_log_survival_curvature(cfg, &kernel));
    match &v {
        Ok(v) => {
            out.push(check_thermal_track(cfg, &kernel, v));
            out.push(check_dominant_mode(cfg, &kernel, v));
        }
        Err(e) => {
            out.push(CheckResult::gated("thermal-track", 1e-4, e));
            out.push(CheckResult::gated("dominant-mode", 1e-6, e));
        }
    }
    Ok(out)
}

/// splitmix64: tiny deterministic generator for the random-draw checks.
struct SplitMix(u64);

impl SplitMix {
    fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * unit
    }
}
