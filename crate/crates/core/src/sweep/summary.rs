use std::fmt;

use super::SweepRecord;
use crate::error::{Error, Result};
use crate::hh::TheoremId;

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremSummary {
    pub theorem: TheoremId,
    pub records: usize,
    pub certified: usize,
    pub violations: usize,
    pub errors: usize,
    /// Over certified, non-error records; NaN when there are none.
    pub max_ratio: f64,
    pub argmax: Option<SweepRecord>,
    pub mean_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub records: usize,
    pub certified: usize,
    pub violations: usize,
    pub errors: usize,
    /// In `TheoremId::ALL` order, only theorems that occur.
    pub per_theorem: Vec<TheoremSummary>,
}

impl Summary {
    pub fn theorem(&self, id: TheoremId) -> Option<&TheoremSummary> {
        self.per_theorem.iter().find(|t| t.theorem == id)
    }
}

pub fn summarize(records: &[SweepRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no sweep records to summarize".into()));
    }
    let mut per_theorem = Vec::new();
    for id in TheoremId::ALL {
        let rows: Vec<&SweepRecord> = records.iter().filter(|r| r.theorem == id).collect();
        if rows.is_empty() {
            continue;
        }
        let usable: Vec<&SweepRecord> = rows.iter().copied().filter(|r| r.certified && !r.is_error()).collect();
        let mut argmax: Option<&SweepRecord> = None;
        for r in &usable {
            // First maximum wins, so ties resolve in grid order.
            if argmax.is_none_or(|m| r.ratio > m.ratio) {
                argmax = Some(r);
            }
        }
        let mean_margin = if usable.is_empty() {
            f64::NAN
        } else {
            usable.iter().map(|r| r.margin).sum::<f64>() / usable.len() as f64
        };
        per_theorem.push(TheoremSummary {
            theorem: id,
            records: rows.len(),
            certified: usable.len(),
            violations: usable.iter().filter(|r| r.is_violation()).count(),
            errors: rows.iter().filter(|r| r.is_error()).count(),
            max_ratio: argmax.map_or(f64::NAN, |r| r.ratio),
            argmax: argmax.cloned(),
            mean_margin,
        });
    }
    Ok(Summary {
        records: records.len(),
        certified: per_theorem.iter().map(|t| t.certified).sum(),
        violations: per_theorem.iter().map(|t| t.violations).sum(),
        errors: per_theorem.iter().map(|t| t.errors).sum(),
        per_theorem,
    })
}

fn g12(v: f64) -> String {
    crate::cli::fmt_num(v)
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records    = {}", self.records)?;
        writeln!(f, "certified  = {}", self.certified)?;
        writeln!(f, "violations = {}", self.violations)?;
        writeln!(f, "errors     = {}", self.errors)?;
        for t in &self.per_theorem {
            writeln!(f)?;
            writeln!(f, "[{}]", t.theorem)?;
            writeln!(f, "records     = {}", t.records)?;
            writeln!(f, "certified   = {}", t.certified)?;
            writeln!(f, "violations  = {}", t.violations)?;
            writeln!(f, "errors      = {}", t.errors)?;
            writeln!(f, "max_ratio   = {}", g12(t.max_ratio))?;
            writeln!(f, "mean_margin = {}", g12(t.mean_margin))?;
            if let Some(r) = &t.argmax {
                writeln!(
                    f,
                    "argmax      = family={} alpha={} s={} x={} q={}",
                    r.family_id,
                    g12(r.alpha),
                    g12(r.s),
                    g12(r.x),
                    g12(r.q)
                )?;
            }
        }
        Ok(())
    }
}
