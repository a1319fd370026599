use std::collections::BTreeMap;

use super::{Family, FamilySpec, SweepGrid, SweepTheorem};
use crate::error::{Error, Result};
use crate::funcmodel::parse_float;

/// A parsed sweep configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid: SweepGrid,
    pub seed: u64,
    pub samples: Option<usize>,
}

/// Parses `key = value` lines; `#` starts a comment. Required keys:
/// alphas, svals, xfracs, qvals, theorems and at least one `family.N`.
/// Optional: seed, samples. Families are ordered by N.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut lists: BTreeMap<&str, (usize, Vec<f64>)> = BTreeMap::new();
    let mut theorems: Option<Vec<SweepTheorem>> = None;
    let mut families: BTreeMap<u64, FamilySpec> = BTreeMap::new();
    let mut seed = 0u64;
    let mut samples = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| Error::Config { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| err(format!("expected 'key = value', found '{body}'")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "alphas" | "svals" | "xfracs" | "qvals" => {
                let vals = value
                    .split(',')
                    .map(|v| parse_float(v).map_err(|e| err(format!("{key}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                if lists.insert(key, (line, vals)).is_some() {
                    return Err(err(format!("duplicate key '{key}'")));
                }
            }
            "theorems" => {
                let ts = value
                    .split(',')
                    .map(|t| t.parse::<SweepTheorem>().map_err(|e| err(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                if theorems.replace(ts).is_some() {
                    return Err(err("duplicate key 'theorems'".into()));
                }
            }
            "seed" => seed = value.parse().map_err(|_| err(format!("seed must be a non-negative integer, got '{value}'")))?,
            "samples" => {
                samples = Some(value.parse().map_err(|_| err(format!("samples must be a positive integer, got '{value}'")))?)
            }
            _ => {
                let n = key
                    .strip_prefix("family.")
                    .ok_or_else(|| err(format!("unknown key '{key}'")))?
                    .parse::<u64>()
                    .map_err(|_| err(format!("family keys look like family.N, got '{key}'")))?;
                let family = Family::parse(value).map_err(|e| err(format!("{key}: {e}")))?;
                if families.insert(n, FamilySpec::new(format!("f{n}"), family)).is_some() {
                    return Err(err(format!("duplicate key '{key}'")));
                }
            }
        }
    }

    let end = text.lines().count().max(1);
    let mut take = |key: &str| {
        lists.remove(key).map(|(_, v)| v).ok_or_else(|| Error::Config { line: end, msg: format!("missing key '{key}'") })
    };
    let grid = SweepGrid {
        alphas: take("alphas")?,
        svals: take("svals")?,
        xfracs: take("xfracs")?,
        qvals: take("qvals")?,
        theorems: theorems.ok_or_else(|| Error::Config { line: end, msg: "missing key 'theorems'".into() })?,
        families: families.into_values().collect(),
    };
    if grid.families.is_empty() {
        return Err(Error::Config { line: end, msg: "no family.N lines".into() });
    }
    if samples == Some(0) {
        return Err(Error::Config { line: end, msg: "samples must be positive".into() });
    }
    grid.validate().map_err(|e| Error::Config { line: end, msg: e.to_string() })?;
    Ok(SweepConfig { grid, seed, samples })
}
