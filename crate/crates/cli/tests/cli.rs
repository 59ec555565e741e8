//! End-to-end checks of the command-line surface: schema, determinism,
//! config precedence, state descriptors, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zeno-distill"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn field(line: &str, idx: usize) -> f64 {
    line.split(',').nth(idx).unwrap().parse().unwrap()
}

#[test]
fn distill_schema_and_reference_row() {
    let out = run(&["distill", "--n-max", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("# zeno-distill v{}", env!("CARGO_PKG_VERSION"))
    );
    assert_eq!(
        lines.next().unwrap(),
        "n,survival,ln_survival,fidelity,mean_quanta,alpha_n_re,alpha_n_im,r_n,phi_n"
    );
    let first = lines.next().unwrap();
    assert!((field(first, 1) - 0.632_572_938_311_638_6).abs() < 1e-12);
    assert!((field(first, 3) - 0.631_140_815_847_465_8).abs() < 1e-12);
    assert!((field(first, 4) - 1.203_556_887_624_840_1).abs() < 1e-12);
    // Fidelity climbs while survival falls.
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 4);
    assert!(field(rows[3], 1) < field(rows[0], 1));
    assert!(field(rows[3], 3) > field(rows[0], 3));
}

#[test]
fn identical_configs_are_byte_identical() {
    let a = run(&["distill", "--n-max", "20"]);
    let b = run(&["distill", "--n-max", "20"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let j1 = run(&["zeno", "--k-max", "5", "--format", "json"]);
    let j2 = run(&["zeno", "--k-max", "5", "--format", "json"]);
    assert_eq!(j1.stdout, j2.stdout);
}

#[test]
fn config_file_applies_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "tau-bar = 1.0\nn-max = 2\n# comment\nalpha0-re = 0\n").unwrap();
    let conf = path.to_str().unwrap();

    // Config alone: 2 rows at τ̄ = 1, α₀ = 0.
    let out = run(&["distill", "--config", conf]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);

    // A flag overrides the file: back to the reference interval, whose
    // N = 1 survival is pinned above.
    let out = run(&[
        "distill",
        "--config",
        conf,
        "--tau-bar",
        "2.827433388230814",
        "--alpha0-re",
        "1",
    ]);
    let text = stdout(&out);
    let first = text.lines().nth(2).unwrap();
    assert!((field(first, 1) - 0.632_572_938_311_638_6).abs() < 1e-10);
}

#[test]
fn free_baseline_starts_at_certainty() {
    let out = run(&["free", "--t-max", "6.283185307179586", "--t-steps", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().nth(1).unwrap(), "t_bar,survival,mean_quanta");
    let first = text.lines().nth(2).unwrap();
    assert_eq!(field(first, 0), 0.0);
    assert!((field(first, 1) - 1.0).abs() < 1e-14);
    assert!((field(first, 2) - 1.0).abs() < 1e-14);
    // One full period later the mode is back to |α₀|².
    let last = text.lines().nth(4).unwrap();
    assert!((field(last, 2) - 1.0).abs() < 1e-10);
}

#[test]
fn curvature_grows_with_amplitude() {
    let out = run(&["lnp-curvature", "--alpha0-list", "0,2,4", "--n-max", "21"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "n,lnp_0,d2lnp_0,lnp_2,d2lnp_2,lnp_4,d2lnp_4"
    );
    // Second differences are undefined at the first row.
    let first = text.lines().nth(2).unwrap();
    assert_eq!(first.split(',').nth(2).unwrap(), "nan");
    let max_abs = |col: usize| -> f64 {
        text.lines()
            .skip(3)
            .take(19)
            .map(|l| field(l, col).abs())
            .fold(0.0, f64::max)
    };
    assert!(max_abs(2) < max_abs(4));
    assert!(max_abs(4) < max_abs(6));
}

#[test]
fn zeno_flags_degenerate_rows_without_failing() {
    // k = 0 lands on τ̄ = 2π (degenerate); later rows are fine.
    let out = run(&["zeno", "--t-bar", "6.283185307179586", "--k-max", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert!(rows[0].ends_with("degenerate"));
    assert!(rows[0].contains("nan"));
    assert!(rows[1].ends_with("distilling"));
}

#[test]
fn mixture_state_runs_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mix.txt");
    std::fs::write(&path, "0.5 1 0\n0.5 -1 0\n").unwrap();
    let spec = format!("mixture:{}", path.display());
    let out = run(&["distill", "--n-max", "3", "--state", &spec]);
    assert!(out.status.success());
    let text = stdout(&out);
    // ±1 components survive like the pure amplitude, and the ensemble
    // has no single displacement label.
    let first = text.lines().nth(2).unwrap();
    assert!((field(first, 1) - 0.632_572_938_311_638_6).abs() < 1e-12);
    assert_eq!(first.split(',').nth(5).unwrap(), "nan");
}

#[test]
fn exit_codes_signal_failure_class() {
    // Degenerate interval: exit 2, message names the regime.
    let out = run(&["distill", "--tau-bar", "6.283185307179586"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    // Unwritable output path: exit 3.
    let out = run(&["distill", "--n-max", "2", "--out", "/nonexistent/x.csv"]);
    assert_eq!(out.status.code(), Some(3));

    // Missing mixture file: exit 3.
    let out = run(&["distill", "--state", "mixture:/nonexistent/mix.txt"]);
    assert_eq!(out.status.code(), Some(3));

    // Bad state descriptor: usage error from clap's value parser.
    let out = run(&["distill", "--state", "squeezed"]);
    assert!(!out.status.success());
}

#[test]
fn oracle_check_trips_on_starved_settings() {
    // A deliberately tiny basis must breach the cross-validation suite.
    let out = bin()
        .args(["oracle-check", "--fock-dim", "16", "--p-quad-order", "4"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.lines().last().unwrap().contains("checks failed"));
}

#[test]
fn mixture_weights_must_normalize(){
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mix.txt");
    std::fs::write(&path, "0.5 1 0\n0.9 -1 0\n").unwrap();
    let spec = format!("mixture:{}", path.display());
    let out = run(&["distill", "--state", &spec]);
    assert_eq!(out.status.code(), Some(2));
}
