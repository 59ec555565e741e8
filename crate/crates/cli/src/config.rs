//! Run configuration: defaults, config-file parsing, flag precedence.
//!
//! Precedence is flags over config-file values over built-in defaults.
//! The config file is flat UTF-8 `key = value` pairs with the same
//! kebab-case names as the flags; `#` starts a comment.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use zeno_distill::pfunc::PFunction;
use zeno_distill::params::SystemParams;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// How the initial field state was requested on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Coherent,
    Mixture(PathBuf),
    Thermal(f64),
}

impl StateSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s == "coherent" {
            return Ok(StateSpec::Coherent);
        }
        if let Some(path) = s.strip_prefix("mixture:") {
            return Ok(StateSpec::Mixture(PathBuf::from(path)));
        }
        if let Some(nbar) = s.strip_prefix("thermal:") {
            let nbar: f64 = nbar
                .parse()
                .map_err(|_| format!("bad thermal occupation `{nbar}`"))?;
            return Ok(StateSpec::Thermal(nbar));
        }
        Err(format!(
            "unknown state `{s}` (expected coherent, mixture:<file> or thermal:<nbar>)"
        ))
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tau_bar: f64,
    pub g_bar: f64,
    pub dp_bar: f64,
    pub alpha0: Complex64,
    pub n_max: u32,
    pub fock_dim: usize,
    pub p_quad_order: usize,
    pub alpha_quad_order: usize,
    pub state: StateSpec,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tau_bar: 0.9 * std::f64::consts::PI,
            g_bar: 1.0,
            dp_bar: 0.4,
            alpha0: Complex64::new(1.0, 0.0),
            n_max: 50,
            fock_dim: 80,
            p_quad_order: 64,
            alpha_quad_order: 32,
            state: StateSpec::Coherent,
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<SystemParams, CliError> {
        SystemParams::new(self.tau_bar, self.g_bar, self.dp_bar).map_err(CliError::from)
    }

    /// Materialize the requested initial state.
    pub fn pfunction(&self) -> Result<PFunction, CliError> {
        match &self.state {
            StateSpec::Coherent => Ok(PFunction::delta(self.alpha0)),
            StateSpec::Thermal(nbar) => {
                PFunction::thermal(*nbar, self.alpha0).map_err(CliError::from)
            }
            StateSpec::Mixture(path) => {
                let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
                parse_mixture(&text).map_err(CliError::Usage)
            }
        }
    }

    /// Overlay `key = value` pairs from a config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            self.apply_pair(key.trim(), value.trim())
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    fn apply_pair(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |what: &str| format!("bad {what} `{value}`");
        match key {
            "tau-bar" => self.tau_bar = value.parse().map_err(|_| bad("number"))?,
            "g-bar" => self.g_bar = value.parse().map_err(|_| bad("number"))?,
            "dp-bar" => self.dp_bar = value.parse().map_err(|_| bad("number"))?,
            "alpha0-re" => self.alpha0.re = value.parse().map_err(|_| bad("number"))?,
            "alpha0-im" => self.alpha0.im = value.parse().map_err(|_| bad("number"))?,
            "n-max" => self.n_max = value.parse().map_err(|_| bad("integer"))?,
            "fock-dim" => self.fock_dim = value.parse().map_err(|_| bad("integer"))?,
            "p-quad-order" => self.p_quad_order = value.parse().map_err(|_| bad("integer"))?,
            "alpha-quad-order" => {
                self.alpha_quad_order = value.parse().map_err(|_| bad("integer"))?
            }
            "state" => self.state = StateSpec::parse(value)?,
            "format" => self.format = OutputFormat::parse(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(format!("unknown config key `{other}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_max < 1 {
            return Err(CliError::Usage("n-max must be at least 1".into()));
        }
        if self.fock_dim < 16 {
            return Err(CliError::Usage("fock-dim must be at least 16".into()));
        }
        if self.p_quad_order < 1 || self.alpha_quad_order < 1 {
            return Err(CliError::Usage("quadrature orders must be at least 1".into()));
        }
        Ok(())
    }
}

/// Mixture file: one component per line, `weight alpha_re alpha_im`,
/// whitespace separated; `#` comments allowed. Weights must sum to 1.
pub fn parse_mixture(text: &str) -> Result<PFunction, String> {
    let mut parts = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(format!(
                "mixture line {}: expected `weight alpha_re alpha_im`",
                lineno + 1
            ));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("mixture line {}: bad number `{s}`", lineno + 1))
        };
        parts.push((
            parse(fields[0])?,
            Complex64::new(parse(fields[1])?, parse(fields[2])?),
        ));
    }
    PFunction::coherent_mixture(parts).map_err(|e| e.to_string())
}
