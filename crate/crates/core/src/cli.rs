//! Command-line front end. `run` returns the process exit code:
//! 0 pass, 1 violation or residual failure, 2 usage or input error,
//! 3 quadrature tolerance failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::funcmodel::{certify_s_concave, certify_s_convex, parse_function, CertifyConfig, FunctionModel};
use crate::hh::{self, BoundReport, Evaluator, ProblemInstance, TheoremId};
use crate::quad::QuadratureConfig;
use crate::sweep::{self, parse_config};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fracineq", version, about = "Numerical checks of fractional Hermite-Hadamard type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate both sides of the fractional integral identity.
    Identity {
        #[arg(long = "f", value_name = "SPEC")]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        alpha: f64,
        /// Residual threshold, scaled by 1 + |lhs|.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Evaluate one inequality on one instance.
    Bound {
        #[arg(long, value_enum)]
        thm: ThmArg,
        #[arg(long = "f", value_name = "SPEC")]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// Defaults to the midpoint of [a, b].
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// Required for t21..t24; fixed at 1 for c13..c16 and hh.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample-based check of s-convexity or s-concavity on the declared domain.
    Certify {
        #[arg(long = "f", value_name = "SPEC")]
        f: String,
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a parameter sweep from a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ThmArg {
    T21,
    T22,
    T23,
    T24,
    C13,
    C14,
    C15,
    C16,
    Hh,
}

impl ThmArg {
    fn theorem(self) -> Option<TheoremId> {
        match self {
            ThmArg::T21 => Some(TheoremId::T21),
            ThmArg::T22 => Some(TheoremId::T22),
            ThmArg::T23 => Some(TheoremId::T23),
            ThmArg::T24 => Some(TheoremId::T24),
            ThmArg::C13 => Some(TheoremId::C13),
            ThmArg::C14 => Some(TheoremId::C14),
            ThmArg::C15 => Some(TheoremId::C15),
            ThmArg::C16 => Some(TheoremId::C16),
            ThmArg::Hh => None,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Convex,
    Concave,
}

/// Formats with 12 significant digits, switching to exponent form outside
/// [1e-5, 1e12). Independent of locale.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let sci = format!("{v:.11e}");
    // Rounding can bump the exponent; trust the formatted one.
    let exp = sci.split('e').nth(1).and_then(|e| e.parse::<i32>().ok()).unwrap_or(exp);
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{v:.decimals$}");
        trim_zeros(&fixed)
    } else {
        let (mant, e) = sci.split_once('e').expect("exponent form");
        format!("{}e{e}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

struct Lines(Vec<(String, String)>);

impl Lines {
    fn new() -> Self {
        Lines(Vec::new())
    }

    fn push(&mut self, key: &str, value: impl Into<String>) {
        self.0.push((key.to_string(), value.into()));
    }

    fn num(&mut self, key: &str, v: f64) {
        self.push(key, fmt_num(v));
    }

    fn write(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let width = self.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.0 {
            writeln!(out, "{k:<width$} = {v}")?;
        }
        Ok(())
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Tolerance { .. } => EXIT_QUADRATURE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Identity { f, a, b, x, alpha, tol } => cmd_identity(&f, a, b, x, alpha, tol, out, err),
        Command::Bound { thm, f, a, b, x, alpha, s, q, p, samples, seed } => {
            let opts = BoundArgs { thm, a, b, x, alpha, s, q, p, cert: CertifyConfig { samples, seed } };
            cmd_bound(&f, opts, out, err)
        }
        Command::Certify { f, s, mode, samples, seed } => cmd_certify(&f, s, mode, samples, seed, out),
        Command::Sweep { config, out: csv, summary, svg } => cmd_sweep(&config, &csv, summary.as_ref(), svg.as_ref(), out),
    }
}

/// When f' blows up at the left end of [a, b], moves a (and x if needed)
/// inward by 1e-9 of the width.
fn shrink_if_singular(
    f: FunctionModel,
    a: f64,
    b: f64,
    x: f64,
    err: &mut dyn Write,
) -> Result<(FunctionModel, f64, f64)> {
    if !(a < b) {
        return Ok((f, a, x));
    }
    let on_ab = f.restrict(a, b)?;
    match on_ab.shrink_for_derivative()? {
        None => Ok((f, a, x)),
        Some(shrunk) => {
            let a2 = shrunk.lo();
            let _ = writeln!(
                err,
                "note: f' is unbounded at u = {}; evaluating on [{}, {}] instead",
                fmt_num(a),
                fmt_num(a2),
                fmt_num(b)
            );
            Ok((shrunk, a2, x.max(a2)))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_identity(
    spec: &str,
    a: f64,
    b: f64,
    x: f64,
    alpha: f64,
    tol: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    if !(tol >= 0.0) {
        return Err(Error::precondition(format!("tol must be non-negative, got {tol}")));
    }
    let f = parse_function(spec)?;
    ProblemInstance::new(f.clone(), a, b, x, alpha, 1.0)?;
    let (f, a, x) = shrink_if_singular(f, a, b, x, err)?;
    let inst = ProblemInstance::new(f, a, b, x, alpha, 1.0)?;
    let cfg = QuadratureConfig::default();
    let lhs = hh::identity_lhs(&inst, &cfg)?;
    let rhs = hh::identity_rhs(&inst, &cfg)?;
    let residual = (lhs - rhs).abs();
    let threshold = tol * (1.0 + lhs.abs());
    let pass = residual <= threshold;

    let mut lines = Lines::new();
    lines.num("lhs", lhs);
    lines.num("rhs", rhs);
    lines.num("residual", residual);
    lines.num("threshold", threshold);
    lines.push("status", if pass { "pass" } else { "fail" });
    lines.write(out)?;
    Ok(if pass { EXIT_PASS } else { EXIT_VIOLATION })
}

struct BoundArgs {
    thm: ThmArg,
    a: f64,
    b: f64,
    x: Option<f64>,
    alpha: Option<f64>,
    s: f64,
    q: Option<f64>,
    p: Option<f64>,
    cert: CertifyConfig,
}

fn cmd_bound(spec: &str, o: BoundArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let f = parse_function(spec)?;
    let ev = Evaluator::new(QuadratureConfig::default(), o.cert);
    let x = o.x.unwrap_or(0.5 * (o.a + o.b));

    let Some(thm) = o.thm.theorem() else {
        let inst = ProblemInstance::new(f, o.a, o.b, x, 1.0, o.s)?;
        let (left, right) = hh::hh_bounds(&inst.f, inst.a, inst.b, inst.s, &ev)?;
        write_report(&left, out)?;
        writeln!(out)?;
        write_report(&right, out)?;
        let violated = left.is_violation() || right.is_violation();
        return Ok(if violated { EXIT_VIOLATION } else { EXIT_PASS });
    };

    let alpha = if thm.is_classical() {
        match o.alpha {
            Some(al) if al != 1.0 => {
                return Err(Error::precondition(format!("{thm} is the order-one case; alpha must be 1, got {al}")))
            }
            _ => 1.0,
        }
    } else {
        o.alpha.ok_or_else(|| Error::precondition(format!("{thm} needs --alpha")))?
    };

    ProblemInstance::new(f.clone(), o.a, o.b, x, alpha, o.s)?;
    let (f, a, x) = shrink_if_singular(f, o.a, o.b, x, err)?;
    let mut inst = ProblemInstance::new(f, a, o.b, x, alpha, o.s)?;
    if thm.uses_q() {
        inst = match (o.p, o.q) {
            (Some(p), Some(q)) => inst.with_exponents(p, q)?,
            (None, Some(q)) => inst.with_q(q)?,
            (Some(p), None) if p > 1.0 => inst.with_exponents(p, p / (p - 1.0))?,
            _ => return Err(Error::precondition(format!("{thm} needs --q (or --p)"))),
        };
    }
    match thm {
        TheoremId::T23 | TheoremId::C15 => {
            writeln!(err, "note: the (b-x) term of this bound uses |f'(b)|^q")?;
        }
        TheoremId::C16 => {
            writeln!(err, "note: the classical weights (x-a) and (b-x) enter squared")?;
        }
        _ => {}
    }
    let report = hh::bound(thm, &inst, &ev)?;
    write_report(&report, out)?;
    Ok(if report.is_violation() { EXIT_VIOLATION } else { EXIT_PASS })
}

fn write_report(r: &BoundReport, out: &mut dyn Write) -> Result<()> {
    let mut lines = Lines::new();
    lines.push("theorem", r.theorem.as_str());
    lines.num("lhs", r.lhs);
    lines.num("rhs", r.rhs);
    lines.num("margin", r.margin);
    lines.num("ratio", r.ratio);
    lines.num("a", r.params.a);
    lines.num("b", r.params.b);
    lines.num("x", r.params.x);
    lines.num("alpha", r.params.alpha);
    lines.num("s", r.params.s);
    if let Some(p) = r.params.p {
        lines.num("p", p);
    }
    if let Some(q) = r.params.q {
        lines.num("q", q);
    }
    lines.push("certified", r.hypothesis_certified.to_string());
    lines.num("quad_error_est", r.quad_error_est);
    lines.push("status", if r.is_violation() { "violation" } else { "pass" });
    lines.write(out)?;
    Ok(())
}

fn cmd_certify(spec: &str, s: f64, mode: ModeArg, samples: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let f = parse_function(spec)?;
    let rep = match mode {
        ModeArg::Convex => certify_s_convex(&f, s, samples, seed)?,
        ModeArg::Concave => certify_s_concave(&f, s, samples, seed)?,
    };
    let mut lines = Lines::new();
    lines.push("mode", rep.mode.to_string());
    lines.num("s", rep.s);
    lines.push("pass", rep.pass.to_string());
    lines.num("worst_violation", rep.worst_violation);
    lines.num("tolerance", rep.tolerance);
    lines.push(
        "witness",
        format!("x={} y={} lambda={}", fmt_num(rep.witness.x), fmt_num(rep.witness.y), fmt_num(rep.witness.lambda)),
    );
    lines.push("samples", rep.samples.to_string());
    lines.push("seed", rep.seed.to_string());
    lines.write(out)?;
    Ok(if rep.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

fn cmd_sweep(
    config: &PathBuf,
    csv: &PathBuf,
    summary_path: Option<&PathBuf>,
    svg_path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    let text = fs::read_to_string(config)?;
    let cfg = parse_config(&text)?;
    let cert = CertifyConfig { seed: cfg.seed, samples: cfg.samples.unwrap_or(CertifyConfig::default().samples) };
    let records = sweep::run_sweep_with(&cfg.grid, &QuadratureConfig::default(), cert)?;
    sweep::write_csv(&records, csv)?;
    let summary = sweep::summarize(&records)?;
    let text = summary.to_string();
    if let Some(path) = summary_path {
        fs::write(path, &text)?;
    }
    if let Some(path) = svg_path {
        fs::write(path, sweep::render_svg(&records))?;
    }
    out.write_all(text.as_bytes())?;
    Ok(if summary.violations > 0 {
        EXIT_VIOLATION
    } else if summary.errors > 0 {
        EXIT_QUADRATURE
    } else {
        EXIT_PASS
    })
}
