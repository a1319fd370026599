use super::ProblemInstance;
use crate::error::Result;
use crate::quad::{integrate, Estimate, QuadratureConfig};
use crate::rlint::{rl_left_estimate, rl_right_estimate};
use crate::specfun;

/// Left side of the fractional identity, with the propagated quadrature
/// error.
///
/// J_{x-}^α f(a) = 1/Γ(α) ∫_a^x (t-a)^(α-1) f(t) dt is the right-sided
/// integral with terminal x evaluated at a; J_{x+}^α f(b) is the
/// left-sided integral with origin x evaluated at b.
pub fn identity_lhs_estimate(inst: &ProblemInstance, cfg: &QuadratureConfig) -> Result<Estimate> {
    let ProblemInstance { f, a, b, x, alpha, .. } = inst;
    let (a, b, x, alpha) = (*a, *b, *x, *alpha);
    let width = b - a;
    let j_left = rl_right_estimate(f, x, alpha, a, cfg)?;
    let j_right = rl_left_estimate(f, x, alpha, b, cfg)?;
    let g = specfun::gamma(alpha + 1.0)?;
    let endpoint = ((x - a).powf(alpha) * f.evaluate(a)? + (b - x).powf(alpha) * f.evaluate(b)?) / width;
    let value = endpoint - g / width * (j_left.value + j_right.value);
    Ok(Estimate {
        value,
        error: g / width * (j_left.error + j_right.error),
    })
}

pub fn identity_lhs(inst: &ProblemInstance, cfg: &QuadratureConfig) -> Result<f64> {
    identity_lhs_estimate(inst, cfg).map(|e| e.value)
}

/// Right side of the identity, integrating f' along the two segments
/// t ↦ tx + (1-t)a and t ↦ tx + (1-t)b.
pub fn identity_rhs_estimate(inst: &ProblemInstance, cfg: &QuadratureConfig) -> Result<Estimate> {
    let ProblemInstance { f, a, b, x, alpha, .. } = inst;
    let (a, b, x, alpha) = (*a, *b, *x, *alpha);
    let fp = f.restrict(a, b)?.derivative()?;
    let width = b - a;
    let mut total = Estimate { value: 0.0, error: 0.0 };
    if x > a {
        let w = (x - a).powf(alpha + 1.0) / width;
        let est = integrate(
            |t| Ok((t.powf(alpha) - 1.0) * fp.eval_clamped(t * x + (1.0 - t) * a)),
            0.0,
            1.0,
            cfg,
        )?;
        total.value += w * est.value;
        total.error += w * est.error;
    }
    if x < b {
        let w = (b - x).powf(alpha + 1.0) / width;
        let est = integrate(
            |t| Ok((1.0 - t.powf(alpha)) * fp.eval_clamped(t * x + (1.0 - t) * b)),
            0.0,
            1.0,
            cfg,
        )?;
        total.value += w * est.value;
        total.error += w * est.error;
    }
    Ok(total)
}

pub fn identity_rhs(inst: &ProblemInstance, cfg: &QuadratureConfig) -> Result<f64> {
    identity_rhs_estimate(inst, cfg).map(|e| e.value)
}
