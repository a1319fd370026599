//! Right-hand sides of the fractional bounds and of their classical
//! (order one) counterparts. The classical formulas are written out
//! independently, without Gamma functions, so that the reduction check
//! compares two separate code paths.

use super::constants::{weight_c1, weight_c2, weight_c3};
use super::identity::identity_lhs_estimate;
use super::sandwich::hh_bounds;
use super::{BoundReport, Evaluator, Hypothesis, HypothesisTarget, ProblemInstance, TheoremId};
use crate::error::{Error, Result};
use crate::funcmodel::ConvexityMode;
use crate::quad::Estimate;

/// |f'| at the points the bounds read.
struct Slopes {
    at_a: f64,
    at_x: f64,
    at_b: f64,
    mid_a: f64,
    mid_b: f64,
}

impl Slopes {
    fn of(inst: &ProblemInstance) -> Result<Self> {
        let fp = inst.f.restrict(inst.a, inst.b)?.derivative()?;
        let abs = |u: f64| fp.evaluate(u).map(f64::abs);
        Ok(Self {
            at_a: abs(inst.a)?,
            at_x: abs(inst.x)?,
            at_b: abs(inst.b)?,
            mid_a: abs(0.5 * (inst.x + inst.a))?,
            mid_b: abs(0.5 * (inst.x + inst.b))?,
        })
    }
}

/// The convexity assumption a theorem places on f.
pub fn hypothesis_for(thm: TheoremId, inst: &ProblemInstance) -> Result<Hypothesis> {
    use TheoremId::*;
    let (target, mode) = match thm {
        T21 | C13 => (HypothesisTarget::DerivativePower(1.0), ConvexityMode::Convex),
        T22 | T23 | C14 | C15 => (
            HypothesisTarget::DerivativePower(inst.require_q(false)?),
            ConvexityMode::Convex,
        ),
        T24 | C16 => (
            HypothesisTarget::DerivativePower(inst.require_q(true)?),
            ConvexityMode::Concave,
        ),
        Hh11Left | Hh11Right => (HypothesisTarget::Function, ConvexityMode::Convex),
    };
    Ok(Hypothesis { target, mode })
}

fn rhs_t21(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, alpha, s) = (inst.a, inst.b, inst.x, inst.alpha, inst.s);
    let left = (x - a).powf(alpha + 1.0);
    let right = (b - x).powf(alpha + 1.0);
    let width = b - a;
    Ok(weight_c1(alpha, s) * ((left + right) / width) * g.at_x
        + weight_c2(alpha, s)? * ((left * g.at_a + right * g.at_b) / width))
}

fn rhs_t22(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, alpha, s) = (inst.a, inst.b, inst.x, inst.alpha, inst.s);
    let q = inst.require_q(true)?;
    let p = inst.require_p()?;
    let width = b - a;
    let prefactor = weight_c3(alpha, p)?.powf(1.0 / p);
    let gx = g.at_x.powf(q);
    let left = (x - a).powf(alpha + 1.0) / width * ((gx + g.at_a.powf(q)) / (s + 1.0)).powf(1.0 / q);
    let right = (b - x).powf(alpha + 1.0) / width * ((gx + g.at_b.powf(q)) / (s + 1.0)).powf(1.0 / q);
    Ok(prefactor * (left + right))
}

fn rhs_t23(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, alpha, s) = (inst.a, inst.b, inst.x, inst.alpha, inst.s);
    let q = inst.require_q(false)?;
    let width = b - a;
    let c1 = weight_c1(alpha, s);
    let c2 = weight_c2(alpha, s)?;
    let prefactor = (alpha / (alpha + 1.0)).powf(1.0 - 1.0 / q);
    let gx = g.at_x.powf(q);
    // The (b-x) addend reads |f'(b)|^q.
    let left = (x - a).powf(alpha + 1.0) / width * (c1 * gx + c2 * g.at_a.powf(q)).powf(1.0 / q);
    let right = (b - x).powf(alpha + 1.0) / width * (c1 * gx + c2 * g.at_b.powf(q)).powf(1.0 / q);
    Ok(prefactor * (left + right))
}

fn rhs_t24(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, alpha, s) = (inst.a, inst.b, inst.x, inst.alpha, inst.s);
    let q = inst.require_q(true)?;
    let p = inst.require_p()?;
    let prefactor = weight_c3(alpha, p)?.powf(1.0 / p) * 2f64.powf((s - 1.0) / q) / (b - a);
    Ok(prefactor * ((x - a).powf(alpha + 1.0) * g.mid_a + (b - x).powf(alpha + 1.0) * g.mid_b))
}

fn rhs_c13(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, s) = (inst.a, inst.b, inst.x, inst.s);
    let width = b - a;
    let da2 = (x - a) * (x - a);
    let db2 = (b - x) * (b - x);
    Ok(1.0 / ((s + 1.0) * (s + 2.0)) * g.at_x * ((da2 + db2) / width)
        + 1.0 / (s + 2.0) * (da2 / width * g.at_a + db2 / width * g.at_b))
}

fn rhs_c14(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, s) = (inst.a, inst.b, inst.x, inst.s);
    let q = inst.require_q(true)?;
    let p = inst.require_p()?;
    let width = b - a;
    let k = (1.0 / (p + 1.0)).powf(1.0 / p);
    let gx = g.at_x.powf(q);
    Ok((x - a) * (x - a) / width * k * ((gx + g.at_a.powf(q)) / (s + 1.0)).powf(1.0 / q)
        + (b - x) * (b - x) / width * k * ((gx + g.at_b.powf(q)) / (s + 1.0)).powf(1.0 / q))
}

fn rhs_c15(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, s) = (inst.a, inst.b, inst.x, inst.s);
    let q = inst.require_q(false)?;
    let width = b - a;
    let k = 0.5f64.powf(1.0 - 1.0 / q);
    let gx = g.at_x.powf(q) / ((s + 1.0) * (s + 2.0));
    Ok((x - a) * (x - a) / width * k * (gx + g.at_a.powf(q) / (s + 2.0)).powf(1.0 / q)
        + (b - x) * (b - x) / width * k * (gx + g.at_b.powf(q) / (s + 2.0)).powf(1.0 / q))
}

fn rhs_c16(inst: &ProblemInstance, g: &Slopes) -> Result<f64> {
    let (a, b, x, s) = (inst.a, inst.b, inst.x, inst.s);
    let q = inst.require_q(true)?;
    let p = inst.require_p()?;
    // Weights (x-a)^2 and (b-x)^2: the order-one value of the exponent α+1.
    let k = 2f64.powf((s - 1.0) / q) / ((1.0 + p).powf(1.0 / p) * (b - a));
    Ok(k * ((x - a) * (x - a) * g.mid_a + (b - x) * (b - x) * g.mid_b))
}

/// Evaluates a derivative-based bound given a precomputed signed left side
/// of the identity.
pub fn bound_with_lhs(
    thm: TheoremId,
    inst: &ProblemInstance,
    lhs: Estimate,
    ev: &Evaluator,
) -> Result<BoundReport> {
    use TheoremId::*;
    if thm.is_classical() && inst.alpha != 1.0 {
        return Err(Error::precondition(format!(
            "classical bound {thm} needs alpha = 1, got {}",
            inst.alpha
        )));
    }
    let slopes = Slopes::of(inst)?;
    let rhs = match thm {
        T21 => rhs_t21(inst, &slopes)?,
        T22 => rhs_t22(inst, &slopes)?,
        T23 => rhs_t23(inst, &slopes)?,
        T24 => rhs_t24(inst, &slopes)?,
        C13 => rhs_c13(inst, &slopes)?,
        C14 => rhs_c14(inst, &slopes)?,
        C15 => rhs_c15(inst, &slopes)?,
        C16 => rhs_c16(inst, &slopes)?,
        Hh11Left | Hh11Right => {
            return Err(Error::precondition(format!("{thm} is not a derivative bound")))
        }
    };
    let hyp = hypothesis_for(thm, inst)?;
    let cert = ev.certify_hypothesis(hyp, &inst.f, inst.a, inst.b, inst.s)?;
    Ok(BoundReport::new(
        thm,
        lhs.value.abs(),
        rhs,
        inst.clone(),
        cert.pass,
        lhs.error,
    ))
}

/// Evaluates any theorem on an instance.
pub fn bound(thm: TheoremId, inst: &ProblemInstance, ev: &Evaluator) -> Result<BoundReport> {
    if thm.is_sandwich() {
        let (left, right) = hh_bounds(&inst.f, inst.a, inst.b, inst.s, ev)?;
        return Ok(if thm == TheoremId::Hh11Left { left } else { right });
    }
    let lhs = identity_lhs_estimate(inst, &ev.quad)?;
    bound_with_lhs(thm, inst, lhs, ev)
}

pub fn bound_t21(inst: &ProblemInstance, ev: &Evaluator) -> Result<BoundReport> {
    bound(TheoremId::T21, inst, ev)
}

pub fn bound_t22(inst: &ProblemInstance, ev: &Evaluator) -> Result<BoundReport> {
    bound(TheoremId::T22, inst, ev)
}

pub fn bound_t23(inst: &ProblemInstance, ev: &Evaluator) -> Result<BoundReport> {
    bound(TheoremId::T23, inst, ev)
}

pub fn bound_t24(inst: &ProblemInstance, ev: &Evaluator) -> Result<BoundReport> {
    bound(TheoremId::T24, inst, ev)
}

/// One of C13..C16; the instance must have alpha = 1.
pub fn bound_classical(thm: TheoremId, inst: &ProblemInstance, ev: &Evaluator) -> Result<BoundReport> {
    if !thm.is_classical() {
        return Err(Error::precondition(format!("{thm} is not a classical bound")));
    }
    bound(thm, inst, ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::parse_function;

    const HALF_SQUARE: &str = "0.5*(u-0)^2 on [0,1]";
    const POW_1_5: &str = "0.6666666666666666*(u-0)^1.5 on [0,1]";

    fn inst(spec: &str, x: f64, alpha: f64, s: f64) -> ProblemInstance {
        let f = parse_function(spec).unwrap();
        ProblemInstance::new(f, 0.0, 1.0, x, alpha, s).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn t21_half_square() {
        let ev = Evaluator::default();
        let r = bound_t21(&inst(HALF_SQUARE, 0.5, 1.0, 1.0), &ev).unwrap();
        assert!(close(r.lhs, 1.0 / 12.0, 1e-14), "{}", r.lhs);
        assert!(close(r.rhs, 0.125, 1e-15), "{}", r.rhs);
        assert!(r.hypothesis_certified);
        assert!(!r.is_violation());
    }

    #[test]
    fn t21_constant_at_left_end() {
        let ev = Evaluator::default();
        let r = bound_t21(&inst("2*(u-0)^0 on [0,1]", 0.0, 0.7, 0.5), &ev).unwrap();
        assert!(r.lhs < 1e-15);
        assert_eq!(r.rhs, 0.0);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn t21_fractional_power_shifted_interval() {
        // 40-digit reference values.
        let ev = Evaluator::default();
        let f = parse_function(POW_1_5).unwrap();
        let i = ProblemInstance::new(f, 0.01, 1.0, 0.5, 0.5, 0.5).unwrap();
        let r = bound_t21(&i, &ev).unwrap();
        assert!(close(r.lhs, 0.066973277258940817554, 1e-11), "{}", r.lhs);
        assert!(close(r.rhs, 0.19025137481511611907, 1e-13), "{}", r.rhs);
        assert!(r.lhs <= r.rhs);
        assert!(r.hypothesis_certified);
    }

    #[test]
    fn t22_half_square() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 0.5, 1.0, 1.0).with_q(2.0).unwrap();
        let r = bound_t22(&i, &ev).unwrap();
        assert!(close(r.rhs, 0.16513990245489248402, 1e-15), "{}", r.rhs);
        assert!(close(r.lhs, 1.0 / 12.0, 1e-14));
        let c = bound_classical(TheoremId::C14, &i, &ev).unwrap();
        assert!(close(r.rhs, c.rhs, 1e-12));
    }

    #[test]
    fn t22_at_left_end_keeps_only_right_addend() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 0.0, 0.8, 0.6).with_q(3.0).unwrap();
        let r = bound_t22(&i, &ev).unwrap();
        let p: f64 = 1.5;
        let c3 = weight_c3(0.8, p).unwrap();
        // |f'(0)| = 0 and |f'(1)| = 1
        let want = c3.powf(1.0 / p) * (1.0 / 1.6f64).powf(1.0 / 3.0);
        assert!(close(r.rhs, want, 1e-15), "{} vs {want}", r.rhs);
    }

    #[test]
    fn t23_half_square_and_degeneracy() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 0.5, 1.0, 1.0).with_q(2.0).unwrap();
        let r = bound_t23(&i, &ev).unwrap();
        // (1/2)^(1/2)·(1/4)·[(1/24)^(1/2) + (3/8)^(1/2)]
        assert!(close(r.rhs, 0.14433756729740644113, 1e-15), "{}", r.rhs);

        let i1 = inst(HALF_SQUARE, 0.3, 1.7, 0.4).with_q(1.0).unwrap();
        let t23 = bound_t23(&i1, &ev).unwrap();
        let t21 = bound_t21(&i1, &ev).unwrap();
        assert!(close(t23.rhs, t21.rhs, 1e-15 * (1.0 + t21.rhs)));
    }

    #[test]
    fn t23_at_right_end_keeps_only_left_addend() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 1.0, 2.0, 1.0).with_q(2.0).unwrap();
        let r = bound_t23(&i, &ev).unwrap();
        let c1 = weight_c1(2.0, 1.0);
        let c2 = weight_c2(2.0, 1.0).unwrap();
        let want = (2.0f64 / 3.0).sqrt() * (c1 * 1.0 + c2 * 0.0).sqrt();
        assert!(close(r.rhs, want, 1e-15));
    }

    #[test]
    fn t24_three_halves_power() {
        let ev = Evaluator::default();
        let i = inst(POW_1_5, 0.5, 1.0, 1.0).with_q(2.0).unwrap();
        let r = bound_t24(&i, &ev).unwrap();
        assert!(close(r.rhs, 0.19716878364870322056, 1e-15), "{}", r.rhs);
        assert!(close(r.lhs, 1.0 / 15.0, 1e-12), "{}", r.lhs);
        assert!(r.hypothesis_certified, "u^(q/2) with q = 2 is concave");
        let c = bound_classical(TheoremId::C16, &i, &ev).unwrap();
        assert!(close(r.rhs, c.rhs, 1e-12));
    }

    #[test]
    fn t24_at_left_end() {
        let ev = Evaluator::default();
        let i = inst(POW_1_5, 0.0, 0.5, 1.0).with_q(2.0).unwrap();
        let r = bound_t24(&i, &ev).unwrap();
        let c3 = weight_c3(0.5, 2.0).unwrap();
        let want = c3.sqrt() * 0.5f64.sqrt();
        assert!(close(r.rhs, want, 1e-15));
    }

    #[test]
    fn classical_examples() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 0.5, 1.0, 1.0).with_q(2.0).unwrap();
        let c13 = bound_classical(TheoremId::C13, &i, &ev).unwrap();
        assert!(close(c13.rhs, 0.125, 1e-15));
        let c14 = bound_classical(TheoremId::C14, &i, &ev).unwrap();
        assert!(close(c14.rhs, 0.16513990245489248402, 1e-15));
    }

    #[test]
    fn classical_requires_order_one() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 0.5, 0.5, 1.0).with_q(2.0).unwrap();
        assert!(matches!(
            bound_classical(TheoremId::C13, &i, &ev),
            Err(Error::Precondition(_))
        ));
        assert!(bound_classical(TheoremId::T21, &i, &ev).is_err());
    }

    #[test]
    fn missing_q_is_precondition_error() {
        let ev = Evaluator::default();
        let i = inst(HALF_SQUARE, 0.5, 1.0, 1.0);
        for thm in [TheoremId::T22, TheoremId::T23, TheoremId::T24] {
            assert!(matches!(bound(thm, &i, &ev), Err(Error::Precondition(_))), "{thm}");
        }
        let i1 = i.with_q(1.0).unwrap();
        assert!(bound_t22(&i1, &ev).is_err());
        assert!(bound_t24(&i1, &ev).is_err());
        assert!(bound_t23(&i1, &ev).is_ok());
    }

    #[test]
    fn uncertified_hypothesis_still_evaluates() {
        let ev = Evaluator::default();
        // |f'|^2 = 4u^2 is not concave, so T24's hypothesis fails.
        let i = inst("1*(u-0)^2 on [0,1]", 0.5, 1.0, 1.0).with_q(2.0).unwrap();
        let r = bound_t24(&i, &ev).unwrap();
        assert!(!r.hypothesis_certified);
        assert!(r.rhs > 0.0);
    }
}
