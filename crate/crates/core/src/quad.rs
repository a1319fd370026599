//! Adaptive Gauss-Legendre quadrature on finite intervals.
//!
//! Each panel is integrated once with an n-point rule and once as two
//! half-panels; the difference is the panel's error estimate and the
//! half-panel sum is kept as its value. The panel with the largest
//! estimate is bisected until the global estimate meets the tolerance or
//! the subdivision budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budgets for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub nodes_per_panel: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            nodes_per_panel: 15,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_subdivisions > 0
            && self.nodes_per_panel >= 2;
        if ok {
            Ok(())
        } else {
            Err(Error::precondition(format!("invalid quadrature config {self:?}")))
        }
    }

    /// A tighter configuration for reference integrals in tests and cross-checks.
    pub fn reference() -> Self {
        Self {
            rel_tol: 1e-14,
            abs_tol: 1e-16,
            max_subdivisions: 20_000,
            nodes_per_panel: 20,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of P_n by Newton iteration from the Tricomi initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on [lo, hi].
    pub fn apply<F>(&self, f: &mut F, lo: f64, hi: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut sum = 0.0;
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * z)?;
        }
        Ok(sum * half)
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[derive(Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn evaluate_panel<F>(rule: &GaussLegendre, f: &mut F, lo: f64, hi: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (lo + hi);
    let coarse = rule.apply(f, lo, hi)?;
    let fine = rule.apply(f, lo, mid)? + rule.apply(f, mid, hi)?;
    if !fine.is_finite() {
        return Err(Error::domain(format!("non-finite integrand on [{lo}, {hi}]")));
    }
    Ok(Panel {
        lo,
        hi,
        value: fine,
        error: (fine - coarse).abs(),
    })
}

/// Adaptive integral of a fallible integrand over [lo, hi].
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if lo == hi {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain(format!("integration bounds must be finite: [{lo}, {hi}]")));
    }
    if lo > hi {
        let est = integrate(f, hi, lo, cfg)?;
        return Ok(Estimate { value: -est.value, error: est.error });
    }
    let rule = GaussLegendre::new(cfg.nodes_per_panel);
    let mut heap = BinaryHeap::new();
    heap.push(evaluate_panel(&rule, &mut f, lo, hi)?);
    let mut panels = 1;
    loop {
        // Re-summing keeps the totals free of add/subtract drift.
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if panels >= cfg.max_subdivisions {
            return Err(Error::Tolerance { estimate: error, target, panels });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel cannot be split further in floating point.
            return Err(Error::Tolerance { estimate: error, target, panels });
        }
        heap.push(evaluate_panel(&rule, &mut f, worst.lo, mid)?);
        heap.push(evaluate_panel(&rule, &mut f, mid, worst.hi)?);
        panels += 1;
    }
}

/// Convenience wrapper for infallible integrands.
pub fn integrate_plain<F>(mut f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate(|t| Ok(f(t)), lo, hi, cfg)
}
