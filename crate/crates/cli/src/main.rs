//! Command-line driver: distillation tables, log-survival curvature,
//! the no-measurement baseline, frequent-measurement sweeps, and the
//! oracle cross-validation report.
//!
//! Exit codes: 0 success, 1 tolerance/gate breach, 2 invalid or
//! degenerate/marginal parameters, 3 I/O failure.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use zeno_distill::checks::{run_all, CheckConfig};
use zeno_distill::coherent::{survival_log_prob, zeno_series};
use zeno_distill::error::{EnsembleError, KernelError};
use zeno_distill::iterates::{propagate_amplitude, step_closure};
use zeno_distill::params::{derive_kernel, target_squeeze};
use zeno_distill::pfunc::{
    ensemble_fidelity, ensemble_mean_quanta, evolve_ensemble, PFunction,
};
use zeno_distill::free::free_record;

use config::{OutputFormat, RunConfig, StateSpec};
use output::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys, or parameter domains.
    Usage(String),
    /// Degenerate or marginal measurement kernel.
    Regime(KernelError),
    /// A tolerance or convergence gate tripped.
    Breach(String),
    Io(std::io::Error),
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::InvalidParams { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Regime(e),
        }
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        match e {
            EnsembleError::InvalidPFunction { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Breach(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Breach(_) => 1,
            CliError::Usage(_) | CliError::Regime(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Regime(e) => e.to_string(),
            CliError::Breach(m) => m.clone(),
            CliError::Io(e) => format!("i/o failure: {e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "zeno-distill",
    version,
    about = "Repeated partial measurements of a probe coupled to a field mode: \
             distillation tables, Zeno sweeps, baselines, oracle checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

/// Global knobs; every one of them can also come from `--config` (flags
/// win over the file, the file wins over defaults).
#[derive(Args)]
struct Overrides {
    /// Flat key = value config file (kebab-case keys as the flags).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimensionless measurement interval ωτ.
    #[arg(long, global = true)]
    tau_bar: Option<f64>,
    /// Dimensionless coupling g√(m/ħω).
    #[arg(long, global = true)]
    g_bar: Option<f64>,
    /// Dimensionless probe momentum width Δp₀/√(mħω).
    #[arg(long, global = true)]
    dp_bar: Option<f64>,
    /// Re α₀ of the initial coherent amplitude (also the thermal center).
    #[arg(long, global = true)]
    alpha0_re: Option<f64>,
    /// Im α₀.
    #[arg(long, global = true)]
    alpha0_im: Option<f64>,
    /// Number of measurements in series commands.
    #[arg(long, global = true)]
    n_max: Option<u32>,
    /// Truncated basis size for the oracle.
    #[arg(long, global = true)]
    fock_dim: Option<usize>,
    /// Gauss–Hermite order for the probe-momentum average.
    #[arg(long, global = true)]
    p_quad_order: Option<usize>,
    /// Gauss–Hermite order per axis for thermal phase-space integrals.
    #[arg(long, global = true)]
    alpha_quad_order: Option<usize>,
    /// Initial field state: coherent | mixture:<file> | thermal:<nbar>.
    #[arg(long, global = true, value_parser = StateSpec::parse)]
    state: Option<StateSpec>,
    /// Output format: csv | json.
    #[arg(long, global = true, value_parser = OutputFormat::parse)]
    format: Option<OutputFormat>,
    /// Output path (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Distillation series at fixed τ̄: survival, fidelity, mean quanta
    /// and the state label for N = 1..n-max.
    Distill,
    /// ln P(Nτ̄) and its second difference per initial amplitude.
    LnpCurvature {
        /// Comma-separated real amplitudes α₀.
        #[arg(long, default_value = "0,2,4")]
        alpha0_list: String,
    },
    /// No-measurement baseline over a uniform time grid.
    Free {
        /// Largest elapsed phase t̄.
        #[arg(long, default_value_t = 6.0 * std::f64::consts::PI)]
        t_max: f64,
        /// Number of grid points (including both ends).
        #[arg(long, default_value_t = 241)]
        t_steps: usize,
    },
    /// Frequent-measurement sweep at fixed total time: N = 2^k rows.
    Zeno {
        /// Total elapsed phase t̄ = Nτ̄.
        #[arg(long, default_value_t = 0.9 * std::f64::consts::PI)]
        t_bar: f64,
        /// Largest doubling exponent.
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Run the full closed-form vs oracle cross-validation suite.
    OracleCheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.overrides.config {
        if let Err(e) = cfg.apply_file(path) {
            eprintln!("zeno-distill: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    }
    apply_overrides(&mut cfg, &cli.overrides);

    match run(&cli.command, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zeno-distill: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn apply_overrides(cfg: &mut RunConfig, o: &Overrides) {
    if let Some(v) = o.tau_bar {
        cfg.tau_bar = v;
    }
    if let Some(v) = o.g_bar {
        cfg.g_bar = v;
    }
    if let Some(v) = o.dp_bar {
        cfg.dp_bar = v;
    }
    if let Some(v) = o.alpha0_re {
        cfg.alpha0.re = v;
    }
    if let Some(v) = o.alpha0_im {
        cfg.alpha0.im = v;
    }
    if let Some(v) = o.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = o.fock_dim {
        cfg.fock_dim = v;
    }
    if let Some(v) = o.p_quad_order {
        cfg.p_quad_order = v;
    }
    if let Some(v) = o.alpha_quad_order {
        cfg.alpha_quad_order = v;
    }
    if let Some(v) = &o.state {
        cfg.state = v.clone();
    }
    if let Some(v) = o.format {
        cfg.format = v;
    }
    if let Some(v) = &o.out {
        cfg.out = Some(v.clone());
    }
}

fn run(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    match command {
        Command::Distill => cmd_distill(cfg),
        Command::LnpCurvature { alpha0_list } => cmd_lnp_curvature(cfg, alpha0_list),
        Command::Free { t_max, t_steps } => cmd_free(cfg, *t_max, *t_steps),
        Command::Zeno { t_bar, k_max } => cmd_zeno(cfg, *t_bar, *k_max),
        Command::OracleCheck => cmd_oracle_check(cfg),
    }
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    match &cfg.out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(cfg.format, &mut lock).map_err(CliError::Io)
        }
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(CliError::Io)?;
            table.write(cfg.format, &mut file).map_err(CliError::Io)
        }
    }
}

fn cmd_distill(cfg: &RunConfig) -> Result<(), CliError> {
    let kernel = derive_kernel(&cfg.params()?)?;
    let target = target_squeeze(&kernel);
    let pfunc = cfg.pfunction()?;

    let mut table = Table::new(
        [
            "n",
            "survival",
            "ln_survival",
            "fidelity",
            "mean_quanta",
            "alpha_n_re",
            "alpha_n_im",
            "r_n",
            "phi_n",
        ]
        .map(String::from)
        .to_vec(),
    );

    for n in 1..=cfg.n_max {
        let closure = step_closure(&kernel, n);
        // The displacement label only exists for a pure coherent input;
        // ensemble states fill those columns with nan/null.
        let (log_p, fidelity, quanta, alpha_n) = match &pfunc {
            PFunction::Delta { alpha0 } => {
                let img = propagate_amplitude(&closure, *alpha0);
                let ens = evolve_ensemble(&kernel, &pfunc, n, cfg.alpha_quad_order)?;
                let f = ensemble_fidelity(&ens, &target, &closure);
                let q = ensemble_mean_quanta(&ens, &closure);
                (2.0 * img.log_norm.re, f, q, Some(img.alpha_n))
            }
            _ => {
                let ens = evolve_ensemble(&kernel, &pfunc, n, cfg.alpha_quad_order)?;
                let f = ensemble_fidelity(&ens, &target, &closure);
                let q = ensemble_mean_quanta(&ens, &closure);
                (ens.normalization.ln(), f, q, None)
            }
        };
        let alpha = alpha_n.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        table.push(vec![
            Cell::Int(u64::from(n)),
            Cell::Float(log_p.exp()),
            Cell::Float(log_p),
            Cell::Float(fidelity),
            Cell::Float(quanta),
            Cell::Float(alpha.re),
            Cell::Float(alpha.im),
            Cell::Float(closure.r_n),
            Cell::Float(closure.phi_n),
        ]);
    }
    emit(cfg, &table)
}

fn cmd_lnp_curvature(cfg: &RunConfig, alpha0_list: &str) -> Result<(), CliError> {
    let kernel = derive_kernel(&cfg.params()?)?;
    let amplitudes: Vec<(String, f64)> = alpha0_list
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map(|v| (tok.to_string(), v))
                .map_err(|_| CliError::Usage(format!("bad amplitude `{tok}` in alpha0-list")))
        })
        .collect::<Result<_, _>>()?;
    if amplitudes.is_empty() {
        return Err(CliError::Usage("alpha0-list must not be empty".into()));
    }

    let mut headers = vec!["n".to_string()];
    for (tag, _) in &amplitudes {
        headers.push(format!("lnp_{tag}"));
        headers.push(format!("d2lnp_{tag}"));
    }
    let mut table = Table::new(headers);

    let series: Vec<Vec<f64>> = amplitudes
        .iter()
        .map(|&(_, a)| {
            (1..=cfg.n_max)
                .map(|n| survival_log_prob(&kernel, Complex64::new(a, 0.0), n))
                .collect()
        })
        .collect();

    for idx in 0..cfg.n_max as usize {
        let mut row = vec![Cell::Int(idx as u64 + 1)];
        for lnp in &series {
            row.push(Cell::Float(lnp[idx]));
            // Centered second difference; undefined at the ends.
            let d2 = if idx >= 1 && idx + 1 < lnp.len() {
                lnp[idx + 1] - 2.0 * lnp[idx] + lnp[idx - 1]
            } else {
                f64::NAN
            };
            row.push(Cell::Float(d2));
        }
        table.push(row);
    }
    emit(cfg, &table)
}

fn cmd_free(cfg: &RunConfig, t_max: f64, t_steps: usize) -> Result<(), CliError> {
    if !(t_max > 0.0) || t_steps < 2 {
        return Err(CliError::Usage(
            "free needs t-max > 0 and t-steps >= 2".into(),
        ));
    }
    let params = cfg.params()?;
    let pfunc = cfg.pfunction()?;
    let mut table = Table::new(["t_bar", "survival", "mean_quanta"].map(String::from).to_vec());
    for i in 0..t_steps {
        let t_bar = t_max * i as f64 / (t_steps - 1) as f64;
        let record = free_record(&params, &pfunc, t_bar)?;
        table.push(vec![
            Cell::Float(record.t_bar),
            Cell::Float(record.survival),
            Cell::Float(record.mean_quanta),
        ]);
    }
    emit(cfg, &table)
}

fn cmd_zeno(cfg: &RunConfig, t_bar: f64, k_max: u32) -> Result<(), CliError> {
    if !(t_bar > 0.0) {
        return Err(CliError::Usage("zeno needs t-bar > 0".into()));
    }
    if k_max > 30 {
        return Err(CliError::Usage("k-max beyond 30 overflows the step count".into()));
    }
    let steps: Vec<u32> = (0..=k_max).map(|k| 1u32 << k).collect();
    let rows = zeno_series(cfg.g_bar, cfg.dp_bar, t_bar, cfg.alpha0, &steps);

    let mut table = Table::new(
        ["k", "n", "tau_bar", "survival", "rotated_fidelity", "regime"]
            .map(String::from)
            .to_vec(),
    );
    for (k, row) in rows.iter().enumerate() {
        let (survival, fidelity, regime) = match &row.outcome {
            Ok(point) => (
                point.log_survival.exp(),
                point.rotated_fidelity,
                "distilling".to_string(),
            ),
            Err(KernelError::Degenerate { .. }) => (f64::NAN, f64::NAN, "degenerate".to_string()),
            Err(KernelError::Marginal { .. }) => (f64::NAN, f64::NAN, "marginal".to_string()),
            Err(e) => return Err(CliError::from(e.clone())),
        };
        table.push(vec![
            Cell::Int(k as u64),
            Cell::Int(u64::from(row.n_steps)),
            Cell::Float(row.tau_bar),
            Cell::Float(survival),
            Cell::Float(fidelity),
            Cell::Text(regime),
        ]);
    }
    emit(cfg, &table)
}

fn cmd_oracle_check(cfg: &RunConfig) -> Result<(), CliError> {
    let check_cfg = CheckConfig {
        params: cfg.params()?,
        alpha0: cfg.alpha0,
        fock_dim: cfg.fock_dim,
        p_quad_order: cfg.p_quad_order,
        alpha_quad_order: cfg.alpha_quad_order,
        ..CheckConfig::default()
    };
    let results = run_all(&check_cfg)?;
    let failures = results.iter().filter(|r| !r.passed).count();

    match cfg.format {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "check": r.id,
                        "passed": r.passed,
                        "tolerance": r.tolerance,
                        "observed": if r.observed.is_finite() {
                            serde_json::Value::from(r.observed)
                        } else {
                            serde_json::Value::Null
                        },
                        "detail": r.detail,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "tool": "zeno-distill",
                "version": env!("CARGO_PKG_VERSION"),
                "failures": failures,
                "checks": rows,
            });
            write_text(cfg, &format!("{}\n", serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.into()))?))?;
        }
        OutputFormat::Csv => {
            let mut text = format!("# zeno-distill v{}\n", env!("CARGO_PKG_VERSION"));
            for r in &results {
                text.push_str(&format!(
                    "check {:<26} {}  tolerance {:.1e}  observed {:.3e}  {}\n",
                    r.id,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.tolerance,
                    r.observed,
                    r.detail
                ));
            }
            text.push_str(&format!(
                "{} of {} checks failed\n",
                failures,
                results.len()
            ));
            write_text(cfg, &text)?;
        }
    }

    if failures > 0 {
        Err(CliError::Breach(format!(
            "{failures} cross-validation check(s) out of tolerance"
        )))
    } else {
        Ok(())
    }
}

fn write_text(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(CliError::Io),
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
    }
}
