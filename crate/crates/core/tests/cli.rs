use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracineq"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn field(out: &Output, key: &str) -> f64 {
    let text = String::from_utf8_lossy(&out.stdout);
    text.lines()
        .find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.trim() == key).then(|| v.trim().parse().ok()).flatten()
        })
        .unwrap_or_else(|| panic!("no numeric '{key}' in:\n{text}"))
}

fn shipped_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/standard.conf")
}

const SQUARE: &str = "1*(u-0)^2 on [0,1]";
const HALF_SQUARE: &str = "0.5*(u-0)^2 on [0,1]";
const POW_1_5: &str = "0.6666666666666666*(u-0)^1.5 on [0,1]";

#[test]
fn identity_square_at_midpoint() {
    let out = run(&["identity", "--f", SQUARE, "--a", "0", "--b", "1", "--x", "0.5", "--alpha", "1"]);
    assert_eq!(code(&out), 0);
    assert!((field(&out, "lhs") - 1.0 / 6.0).abs() < 1e-11);
    assert!((field(&out, "rhs") - 1.0 / 6.0).abs() < 1e-11);
}

#[test]
fn identity_constant_is_zero() {
    let out = run(&["identity", "--f", "3*(u-0)^0 on [0,1]", "--a", "0", "--b", "1", "--x", "0.3", "--alpha", "0.5"]);
    assert_eq!(code(&out), 0);
    assert!(field(&out, "lhs").abs() < 1e-12);
    assert_eq!(field(&out, "rhs"), 0.0);
}

#[test]
fn identity_rejects_x_outside() {
    let out = run(&["identity", "--f", SQUARE, "--a", "0", "--b", "1", "--x", "2", "--alpha", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn identity_shrinks_singular_derivative() {
    let out = run(&["identity", "--f", "1*(u-0)^0.5 on [0,1]", "--a", "0", "--b", "1", "--x", "0.3", "--alpha", "0.5"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("note:"));
}

#[test]
fn bound_t21_half_square() {
    let out = run(&["bound", "--thm", "t21", "--f", HALF_SQUARE, "--a", "0", "--b", "1", "--x", "0.5", "--alpha", "1", "--s", "1"]);
    assert_eq!(code(&out), 0);
    assert!((field(&out, "lhs") - 1.0 / 12.0).abs() < 1e-11);
    assert!((field(&out, "rhs") - 0.125).abs() < 1e-12);
}

#[test]
fn bound_c16_matches_t24_example() {
    let out = run(&["bound", "--thm", "c16", "--f", POW_1_5, "--a", "0", "--b", "1", "--x", "0.5", "--s", "1", "--q", "2"]);
    assert_eq!(code(&out), 0);
    assert!((field(&out, "rhs") - 0.197168783649).abs() < 1e-11);
    assert!(String::from_utf8_lossy(&out.stdout).contains("certified      = true"));
}

#[test]
fn bound_t22_needs_q() {
    let out = run(&["bound", "--thm", "t22", "--f", HALF_SQUARE, "--a", "0", "--b", "1", "--x", "0.5", "--alpha", "1", "--s", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bound_rejects_non_conjugate_exponents() {
    let out = run(&[
        "bound", "--thm", "t22", "--f", HALF_SQUARE, "--a", "0", "--b", "1", "--x", "0.5", "--alpha", "1", "--s", "1",
        "--p", "3", "--q", "2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bound_hh_prints_both_sides() {
    let out = run(&["bound", "--thm", "hh", "--f", "1*(u-0)^0.5 on [0,1]", "--a", "0", "--b", "1", "--s", "0.5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("HH11L") && text.contains("HH11R"));
}

#[test]
fn certify_examples() {
    let out = run(&["certify", "--f", "1*(u-0)^0.5 on [0,1]", "--s", "0.5", "--mode", "convex"]);
    assert_eq!(code(&out), 0);
    let out = run(&["certify", "--f", "1*(u-0)^0 on [0,1]", "--s", "0.5", "--mode", "concave"]);
    assert_eq!(code(&out), 1);
    let out = run(&["certify", "--f", "1*(u-0 on [0,1]", "--s", "0.5", "--mode", "convex"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn sweep_standard_config() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let summary = dir.path().join("summary.txt");
    let svg = dir.path().join("plot.svg");
    let out = run(&[
        "sweep",
        "--config",
        shipped_config().to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&summary).unwrap();
    assert!(text.contains("violations = 0"));
    assert!(text.contains("max_ratio"));
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.contains(r#"viewBox="0 0 800 600""#));
}

#[test]
fn sweep_equality_witness_config() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("hh.conf");
    std::fs::write(
        &conf,
        "alphas = 1\nsvals = 0.5\nxfracs = 0.5\nqvals = 2\ntheorems = hh\nfamily.1 = u^s on [0,1]\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&["sweep", "--config", conf.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let right = text.split("[HH11R]").nth(1).expect("right-inequality section");
    let ratio: f64 = right
        .lines()
        .find_map(|l| l.strip_prefix("max_ratio"))
        .and_then(|v| v.trim_start_matches([' ', '=']).trim().parse().ok())
        .unwrap();
    assert!((ratio - 1.0).abs() < 1e-10, "{ratio}");
}

#[test]
fn sweep_without_families_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "alphas = 1\nsvals = 0.5\nxfracs = 0.5\nqvals = 2\ntheorems = t21\n").unwrap();
    let out = run(&["sweep", "--config", conf.to_str().unwrap(), "--out", dir.path().join("o.csv").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}
