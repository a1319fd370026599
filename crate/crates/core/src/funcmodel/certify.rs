//! Sampled certification of s-convexity and s-concavity in the second sense:
//!
//! g(λx + (1-λ)y) ≤ λ^s g(x) + (1-λ)^s g(y)   (convex)
//! g(λx + (1-λ)y) ≥ λ^s g(x) + (1-λ)^s g(y)   (concave)
//!
//! Samples are drawn in fixed-size blocks, each from its own ChaCha stream
//! keyed by (seed, block index), so the verdict does not depend on how many
//! threads evaluate the blocks.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::FunctionModel;
use crate::error::{Error, Result};

const BLOCK: usize = 1024;

/// Relative part of the certification tolerance 1e-10·(1 + max|g|).
pub const CERT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvexityMode {
    Convex,
    Concave,
}

impl fmt::Display for ConvexityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvexityMode::Convex => "convex",
            ConvexityMode::Concave => "concave",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { samples: 20_000, seed: 0 }
    }
}

/// The sample (x, y, λ) at which the worst violation occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub mode: ConvexityMode,
    pub s: f64,
    pub pass: bool,
    /// max over samples of the signed violation; ≤ 0 means the inequality held.
    pub worst_violation: f64,
    pub witness: Witness,
    pub tolerance: f64,
    /// Random samples plus the deterministic boundary set.
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Copy)]
struct Tally {
    worst: f64,
    witness: Witness,
    max_abs: f64,
    count: usize,
}

impl Tally {
    fn empty() -> Self {
        Self {
            worst: f64::NEG_INFINITY,
            witness: Witness { x: f64::NAN, y: f64::NAN, lambda: f64::NAN },
            max_abs: 0.0,
            count: 0,
        }
    }

    // Strict comparison keeps the first of equal violations.
    fn merge(mut self, other: Tally) -> Tally {
        if other.worst > self.worst {
            self.worst = other.worst;
            self.witness = other.witness;
        }
        self.max_abs = self.max_abs.max(other.max_abs);
        self.count += other.count;
        self
    }
}

struct Checker<'a, G> {
    g: &'a G,
    lo: f64,
    hi: f64,
    s: f64,
    mode: ConvexityMode,
}

impl<G: Fn(f64) -> f64> Checker<'_, G> {
    fn sample(&self, tally: &mut Tally, x: f64, y: f64, lambda: f64) {
        let mu = 1.0 - lambda;
        let z = (lambda * x + mu * y).clamp(self.lo, self.hi);
        let (gx, gy, gz) = ((self.g)(x), (self.g)(y), (self.g)(z));
        let chord = lambda.powf(self.s) * gx + mu.powf(self.s) * gy;
        let mut v = match self.mode {
            ConvexityMode::Convex => gz - chord,
            ConvexityMode::Concave => chord - gz,
        };
        if v.is_nan() {
            v = f64::INFINITY;
        }
        let m = gx.abs().max(gy.abs()).max(gz.abs());
        if m.is_finite() {
            tally.max_abs = tally.max_abs.max(m);
        }
        tally.count += 1;
        if v > tally.worst {
            tally.worst = v;
            tally.witness = Witness { x, y, lambda };
        }
    }

    fn boundary(&self) -> Tally {
        let mut tally = Tally::empty();
        let ends = [self.lo, self.hi];
        for lambda in [0.0, 1.0, 0.5] {
            for &x in &ends {
                for &y in &ends {
                    self.sample(&mut tally, x, y, lambda);
                }
            }
        }
        tally
    }

    fn block(&self, seed: u64, index: usize, len: usize) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut tally = Tally::empty();
        let width = self.hi - self.lo;
        for _ in 0..len {
            let x = self.lo + width * rng.gen::<f64>();
            let y = self.lo + width * rng.gen::<f64>();
            let lambda: f64 = rng.gen();
            self.sample(&mut tally, x.min(self.hi), y.min(self.hi), lambda);
        }
        tally
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(Error::precondition(format!("s must lie in (0, 1], got {s}")))
    }
}

/// Certifies an arbitrary function g on [lo, hi].
pub fn certify<G>(
    g: G,
    lo: f64,
    hi: f64,
    s: f64,
    mode: ConvexityMode,
    cfg: &CertifyConfig,
) -> Result<CertificationReport>
where
    G: Fn(f64) -> f64 + Sync,
{
    check_s(s)?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!("invalid certification interval [{lo}, {hi}]")));
    }
    let checker = Checker { g: &g, lo, hi, s, mode };
    let blocks = cfg.samples.div_ceil(BLOCK);
    let tallies: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|k| {
            let len = BLOCK.min(cfg.samples - k * BLOCK);
            checker.block(cfg.seed, k, len)
        })
        .collect();
    let tally = tallies.into_iter().fold(checker.boundary(), Tally::merge);
    let tolerance = CERT_REL_TOL * (1.0 + tally.max_abs);
    Ok(CertificationReport {
        mode,
        s,
        pass: tally.worst <= tolerance,
        worst_violation: tally.worst,
        witness: tally.witness,
        tolerance,
        samples: tally.count,
        seed: cfg.seed,
    })
}

/// Checks g(λx+(1-λ)y) ≤ λ^s g(x) + (1-λ)^s g(y) over the model's domain.
pub fn certify_s_convex(
    g: &FunctionModel,
    s: f64,
    samples: usize,
    seed: u64,
) -> Result<CertificationReport> {
    let cfg = CertifyConfig { samples, seed };
    certify(|u| g.eval_clamped(u), g.lo(), g.hi(), s, ConvexityMode::Convex, &cfg)
}

/// The reversed inequality.
pub fn certify_s_concave(
    g: &FunctionModel,
    s: f64,
    samples: usize,
    seed: u64,
) -> Result<CertificationReport> {
    let cfg = CertifyConfig { samples, seed };
    certify(|u| g.eval_clamped(u), g.lo(), g.hi(), s, ConvexityMode::Concave, &cfg)
}
