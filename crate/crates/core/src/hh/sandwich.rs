use super::{hypothesis_for, BoundReport, Evaluator, ProblemInstance, TheoremId};
use crate::error::{Error, Result};
use crate::funcmodel::FunctionModel;
use crate::quad::{integrate, QuadratureConfig};

/// The three members of 2^(s-1) f((a+b)/2) ≤ mean(f) ≤ (f(a)+f(b))/(s+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub left: f64,
    pub mid: f64,
    pub right: f64,
    pub mid_error: f64,
}

pub fn hh_sandwich(f: &FunctionModel, a: f64, b: f64, s: f64, cfg: &QuadratureConfig) -> Result<Sandwich> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::precondition(format!("s must lie in (0, 1], got {s}")));
    }
    if !(a < b) {
        return Err(Error::precondition(format!("need a < b, got a = {a}, b = {b}")));
    }
    let fa = f.evaluate(a)?;
    let fb = f.evaluate(b)?;
    let fm = f.evaluate(0.5 * (a + b))?;
    let width = b - a;
    let integral = integrate(|u| f.evaluate(u.clamp(a, b)), a, b, cfg)?;
    Ok(Sandwich {
        left: 2f64.powf(s - 1.0) * fm,
        mid: integral.value / width,
        right: (fa + fb) / (s + 1.0),
        mid_error: integral.error / width,
    })
}

/// Both inequalities of the sandwich as reports (left, right).
pub fn hh_bounds(
    f: &FunctionModel,
    a: f64,
    b: f64,
    s: f64,
    ev: &Evaluator,
) -> Result<(BoundReport, BoundReport)> {
    let sw = hh_sandwich(f, a, b, s, &ev.quad)?;
    let params = ProblemInstance::new(f.clone(), a, b, 0.5 * (a + b), 1.0, s)?;
    let hyp = hypothesis_for(TheoremId::Hh11Left, &params)?;
    let certified = ev.certify_hypothesis(hyp, f, a, b, s)?.pass;
    let left = BoundReport::new(TheoremId::Hh11Left, sw.left, sw.mid, params.clone(), certified, sw.mid_error);
    let right = BoundReport::new(TheoremId::Hh11Right, sw.mid, sw.right, params, certified, sw.mid_error);
    Ok((left, right))
}
