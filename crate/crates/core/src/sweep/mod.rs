//! Batch verification over parameter grids.
//!
//! A grid is expanded in a fixed order (family, theorem, s, α, x, q) and
//! evaluated in parallel; results are collected back into that order, so
//! output files are byte-identical across runs and thread counts.

mod config;
mod csv_io;
mod summary;
mod svg;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use config::{parse_config, SweepConfig};
pub use csv_io::{read_csv, write_csv, CSV_HEADER};
pub use summary::{summarize, Summary, TheoremSummary};
pub use svg::render_svg;

use crate::error::{Error, Result};
use crate::funcmodel::{parse_float, parse_function, CertifyConfig, FunctionModel, PowerTerm};
use crate::hh::{self, Evaluator, ProblemInstance, TheoremId};
use crate::quad::{Estimate, QuadratureConfig};

/// Theorems a sweep can exercise. `Hh11` expands into both sandwich
/// inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepTheorem {
    T21,
    T22,
    T23,
    T24,
    Hh11,
}

impl SweepTheorem {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepTheorem::T21 => "t21",
            SweepTheorem::T22 => "t22",
            SweepTheorem::T23 => "t23",
            SweepTheorem::T24 => "t24",
            SweepTheorem::Hh11 => "hh",
        }
    }

    fn theorem_id(&self) -> Option<TheoremId> {
        match self {
            SweepTheorem::T21 => Some(TheoremId::T21),
            SweepTheorem::T22 => Some(TheoremId::T22),
            SweepTheorem::T23 => Some(TheoremId::T23),
            SweepTheorem::T24 => Some(TheoremId::T24),
            SweepTheorem::Hh11 => None,
        }
    }
}

impl fmt::Display for SweepTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "t21" => Ok(SweepTheorem::T21),
            "t22" => Ok(SweepTheorem::T22),
            "t23" => Ok(SweepTheorem::T23),
            "t24" => Ok(SweepTheorem::T24),
            "hh" | "hh11" => Ok(SweepTheorem::Hh11),
            other => Err(Error::precondition(format!("unknown sweep theorem '{other}'"))),
        }
    }
}

/// A test-function family. Some families change with s.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Fixed(FunctionModel),
    /// u^s on [lo, hi]
    SPower { lo: f64, hi: f64 },
    /// u^(s+1)/(s+1) on [lo, hi]
    SPowerIntegral { lo: f64, hi: f64 },
}

impl Family {
    /// Accepts the function-spec grammar, `u^s on [lo,hi]` or
    /// `u^(s+1)/(s+1) on [lo,hi]`.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let templated = |prefix: &str| -> Option<Result<(f64, f64)>> {
            compact.strip_prefix(prefix).map(parse_domain)
        };
        if let Some(dom) = templated("u^(s+1)/(s+1)on") {
            let (lo, hi) = dom?;
            return Self::checked(Family::SPowerIntegral { lo, hi });
        }
        if let Some(dom) = templated("u^son") {
            let (lo, hi) = dom?;
            return Self::checked(Family::SPower { lo, hi });
        }
        Ok(Family::Fixed(parse_function(text)?))
    }

    fn checked(fam: Family) -> Result<Self> {
        fam.model(0.5)?;
        Ok(fam)
    }

    /// The concrete model for a given s.
    pub fn model(&self, s: f64) -> Result<FunctionModel> {
        match self {
            Family::Fixed(m) => Ok(m.clone()),
            Family::SPower { lo, hi } => {
                FunctionModel::new(vec![PowerTerm::new(1.0, 0.0, s)], *lo, *hi)
            }
            Family::SPowerIntegral { lo, hi } => {
                FunctionModel::new(vec![PowerTerm::new(1.0 / (s + 1.0), 0.0, s + 1.0)], *lo, *hi)
            }
        }
    }

    pub fn depends_on_s(&self) -> bool {
        !matches!(self, Family::Fixed(_))
    }

    /// The interval [a, b] the family is exercised on.
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Family::Fixed(m) => (m.lo(), m.hi()),
            Family::SPower { lo, hi } | Family::SPowerIntegral { lo, hi } => (*lo, *hi),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Fixed(m) => write!(f, "{m}"),
            Family::SPower { lo, hi } => write!(f, "u^s on [{lo:?},{hi:?}]"),
            Family::SPowerIntegral { lo, hi } => write!(f, "u^(s+1)/(s+1) on [{lo:?},{hi:?}]"),
        }
    }
}

fn parse_domain(text: &str) -> Result<(f64, f64)> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("expected [lo,hi], found '{text}'") })?;
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("expected [lo,hi], found '{text}'") })?;
    Ok((parse_float(lo)?, parse_float(hi)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub id: String,
    pub family: Family,
}

impl FamilySpec {
    pub fn new(id: impl Into<String>, family: Family) -> Self {
        Self { id: id.into(), family }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub svals: Vec<f64>,
    /// x = a + frac·(b - a)
    pub xfracs: Vec<f64>,
    pub qvals: Vec<f64>,
    pub families: Vec<FamilySpec>,
    pub theorems: Vec<SweepTheorem>,
}

impl SweepGrid {
    /// The default verification grid: 7 orders, 4 values of s, 9 interior
    /// points, 3 Hölder exponents and 6 families.
    pub fn standard() -> Self {
        let fam = |id: &str, spec: &str| FamilySpec::new(id, Family::parse(spec).expect("valid family"));
        Self {
            alphas: vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0],
            svals: vec![0.25, 0.5, 0.75, 1.0],
            xfracs: (0..9).map(|i| 0.05 + 0.1125 * i as f64).collect(),
            qvals: vec![1.5, 2.0, 3.0],
            families: vec![
                fam("square", "1*(u-0)^2 on [0,1]"),
                fam("half_square", "0.5*(u-0)^2 on [0,1]"),
                fam("pow_1_5", "0.6666666666666666*(u-0)^1.5 on [0.01,1]"),
                fam("s_power_integral", "u^(s+1)/(s+1) on [0.01,1]"),
                fam("affine", "1*(u-0)^0 + 1*(u-0)^1 on [0,1]"),
                fam("constant", "1*(u-0)^0 on [0,1]"),
            ],
            theorems: vec![
                SweepTheorem::T21,
                SweepTheorem::T22,
                SweepTheorem::T23,
                SweepTheorem::T24,
                SweepTheorem::Hh11,
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = [
            ("alphas", self.alphas.is_empty()),
            ("svals", self.svals.is_empty()),
            ("xfracs", self.xfracs.is_empty()),
            ("qvals", self.qvals.is_empty()),
            ("families", self.families.is_empty()),
            ("theorems", self.theorems.is_empty()),
        ];
        for (name, empty) in nonempty {
            if empty {
                return Err(Error::precondition(format!("sweep grid needs at least one entry in {name}")));
            }
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::precondition(format!("alpha values must be positive, got {a}")));
        }
        if let Some(s) = self.svals.iter().find(|s| !(**s > 0.0 && **s <= 1.0)) {
            return Err(Error::precondition(format!("s values must lie in (0, 1], got {s}")));
        }
        if let Some(x) = self.xfracs.iter().find(|x| !(**x >= 0.0 && **x <= 1.0)) {
            return Err(Error::precondition(format!("x fractions must lie in [0, 1], got {x}")));
        }
        if let Some(q) = self.qvals.iter().find(|q| !(**q > 1.0 && q.is_finite())) {
            return Err(Error::precondition(format!("q values must exceed 1, got {q}")));
        }
        for fam in &self.families {
            for &s in &self.svals {
                fam.family.model(s)?;
            }
        }
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub theorem: TheoremId,
    pub family_id: String,
    pub alpha: f64,
    pub s: f64,
    pub x: f64,
    pub p: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ratio: f64,
    pub certified: bool,
    pub quad_error_est: f64,
}

impl SweepRecord {
    /// Rows whose evaluation failed carry NaN in lhs and rhs.
    pub fn is_error(&self) -> bool {
        self.lhs.is_nan() || self.rhs.is_nan()
    }

    /// Only certified rows can count as violations.
    pub fn is_violation(&self) -> bool {
        self.certified && !self.is_error() && hh::is_violation(self.margin, self.rhs)
    }

    /// Field-wise equality that treats NaN as equal to NaN.
    pub fn same_as(&self, other: &Self) -> bool {
        let eq = |a: f64, b: f64| a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan());
        self.theorem == other.theorem
            && self.family_id == other.family_id
            && self.certified == other.certified
            && [
                (self.alpha, other.alpha),
                (self.s, other.s),
                (self.x, other.x),
                (self.p, other.p),
                (self.q, other.q),
                (self.lhs, other.lhs),
                (self.rhs, other.rhs),
                (self.margin, other.margin),
                (self.ratio, other.ratio),
                (self.quad_error_est, other.quad_error_est),
            ]
            .iter()
            .all(|&(a, b)| eq(a, b))
    }
}

#[derive(Debug, Clone)]
struct WorkItem {
    family: usize,
    theorem: SweepTheorem,
    s: f64,
    alpha: f64,
    xfrac: f64,
    q: Option<f64>,
}

fn expand(grid: &SweepGrid) -> Vec<WorkItem> {
    let mut items = Vec::new();
    for family in 0..grid.families.len() {
        for &theorem in &grid.theorems {
            for &s in &grid.svals {
                if theorem == SweepTheorem::Hh11 {
                    items.push(WorkItem { family, theorem, s, alpha: f64::NAN, xfrac: f64::NAN, q: None });
                    continue;
                }
                for &alpha in &grid.alphas {
                    for &xfrac in &grid.xfracs {
                        if theorem == SweepTheorem::T21 {
                            items.push(WorkItem { family, theorem, s, alpha, xfrac, q: None });
                        } else {
                            for &q in &grid.qvals {
                                items.push(WorkItem { family, theorem, s, alpha, xfrac, q: Some(q) });
                            }
                        }
                    }
                }
            }
        }
    }
    items
}

type LhsKey = (String, u64, u64);

fn error_record(theorem: TheoremId, family_id: &str, item: &WorkItem, x: f64, p: f64, q: f64) -> SweepRecord {
    SweepRecord {
        theorem,
        family_id: family_id.to_string(),
        alpha: item.alpha,
        s: item.s,
        x,
        p,
        q,
        lhs: f64::NAN,
        rhs: f64::NAN,
        margin: f64::NAN,
        ratio: f64::NAN,
        certified: false,
        quad_error_est: f64::NAN,
    }
}

fn evaluate_item(
    grid: &SweepGrid,
    item: &WorkItem,
    lhs_cache: &HashMap<LhsKey, Result<Estimate>>,
    ev: &Evaluator,
) -> Vec<SweepRecord> {
    let spec = &grid.families[item.family];
    let (a, b) = spec.family.interval();
    let model = match spec.family.model(item.s) {
        Ok(m) => m,
        Err(_) => return vec![],
    };
    if item.theorem == SweepTheorem::Hh11 {
        return match hh::hh_bounds(&model, a, b, item.s, ev) {
            Ok((l, r)) => [l, r]
                .into_iter()
                .map(|rep| SweepRecord {
                    theorem: rep.theorem,
                    family_id: spec.id.clone(),
                    alpha: f64::NAN,
                    s: item.s,
                    x: f64::NAN,
                    p: f64::NAN,
                    q: f64::NAN,
                    lhs: rep.lhs,
                    rhs: rep.rhs,
                    margin: rep.margin,
                    ratio: rep.ratio,
                    certified: rep.hypothesis_certified,
                    quad_error_est: rep.quad_error_est,
                })
                .collect(),
            Err(_) => [TheoremId::Hh11Left, TheoremId::Hh11Right]
                .into_iter()
                .map(|t| error_record(t, &spec.id, item, f64::NAN, f64::NAN, f64::NAN))
                .collect(),
        };
    }
    let theorem = item.theorem.theorem_id().expect("derivative bound");
    let x = a + item.xfrac * (b - a);
    let (p, q) = match item.q {
        Some(q) => (q / (q - 1.0), q),
        None => (f64::NAN, f64::NAN),
    };
    let run = || -> Result<SweepRecord> {
        let mut inst = ProblemInstance::new(model.clone(), a, b, x, item.alpha, item.s)?;
        if let Some(q) = item.q {
            inst = inst.with_q(q)?;
        }
        let key = (model.to_string(), item.alpha.to_bits(), x.to_bits());
        let lhs = match lhs_cache.get(&key) {
            Some(Ok(est)) => *est,
            Some(Err(e)) => return Err(Error::precondition(e.to_string())),
            None => hh::identity_lhs_estimate(&inst, &ev.quad)?,
        };
        let rep = hh::bound_with_lhs(theorem, &inst, lhs, ev)?;
        Ok(SweepRecord {
            theorem,
            family_id: spec.id.clone(),
            alpha: item.alpha,
            s: item.s,
            x,
            p,
            q,
            lhs: rep.lhs,
            rhs: rep.rhs,
            margin: rep.margin,
            ratio: rep.ratio,
            certified: rep.hypothesis_certified,
            quad_error_est: rep.quad_error_est,
        })
    };
    vec![run().unwrap_or_else(|_| error_record(theorem, &spec.id, item, x, p, q))]
}

/// Evaluates every grid point. Output order follows the grid expansion
/// regardless of how the work is scheduled.
pub fn run_sweep(grid: &SweepGrid, cfg: &QuadratureConfig, seed: u64) -> Result<Vec<SweepRecord>> {
    run_sweep_with(grid, cfg, CertifyConfig { seed, ..CertifyConfig::default() })
}

pub fn run_sweep_with(grid: &SweepGrid, cfg: &QuadratureConfig, cert: CertifyConfig) -> Result<Vec<SweepRecord>> {
    grid.validate()?;
    cfg.validate()?;
    let ev = Evaluator::new(*cfg, cert);
    let items = expand(grid);

    // The identity's left side depends only on (f, α, x); compute it once.
    let mut keys: Vec<(LhsKey, ProblemInstance)> = Vec::new();
    let mut seen = HashMap::new();
    for item in items.iter().filter(|i| i.theorem != SweepTheorem::Hh11) {
        let spec = &grid.families[item.family];
        let (a, b) = spec.family.interval();
        let model = spec.family.model(item.s)?;
        let x = a + item.xfrac * (b - a);
        let key = (model.to_string(), item.alpha.to_bits(), x.to_bits());
        if seen.insert(key.clone(), ()).is_none() {
            if let Ok(inst) = ProblemInstance::new(model, a, b, x, item.alpha, item.s) {
                keys.push((key, inst));
            }
        }
    }
    let lhs_cache: HashMap<LhsKey, Result<Estimate>> = keys
        .into_par_iter()
        .map(|(key, inst)| {
            let est = hh::identity_lhs_estimate(&inst, cfg);
            (key, est)
        })
        .collect();

    let records: Vec<Vec<SweepRecord>> = items
        .par_iter()
        .map(|item| evaluate_item(grid, item, &lhs_cache, &ev))
        .collect();
    Ok(records.into_iter().flatten().collect())
}
