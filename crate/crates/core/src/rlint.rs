//! Left and right Riemann-Liouville fractional integrals
//!
//! J_{a+}^α f(x) = 1/Γ(α) ∫_a^x (x-t)^(α-1) f(t) dt
//! J_{b-}^α f(x) = 1/Γ(α) ∫_x^b (t-x)^(α-1) f(t) dt
//!
//! The weak endpoint singularity of the kernel is removed by the change of
//! variables v = ((x-t)/(x-a))^α, which turns the left integral into
//!
//! (x-a)^α / Γ(α+1) · ∫_0^1 f(x - (x-a)·v^(1/α)) dv
//!
//! for every α > 0. The remaining integral is handed to the adaptive
//! Gauss-Legendre integrator.

use crate::error::{Error, Result};
use crate::funcmodel::{FunctionModel, PowerTerm};
use crate::quad::{integrate_plain, Estimate, QuadratureConfig};
use crate::specfun;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::precondition(format!("fractional order must be positive, got {alpha}")))
    }
}

fn check_point(f: &FunctionModel, p: f64, what: &str) -> Result<()> {
    if f.contains(p) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what} = {p} lies outside [{}, {}]",
            f.lo(),
            f.hi()
        )))
    }
}

/// J_{a+}^α f(x) with its absolute error estimate.
pub fn rl_left_estimate(
    f: &FunctionModel,
    a: f64,
    alpha: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_point(f, a, "a")?;
    check_point(f, x, "x")?;
    if x < a {
        return Err(Error::precondition(format!("left integral needs a ≤ x, got a = {a}, x = {x}")));
    }
    if x == a {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let h = x - a;
    let inv = 1.0 / alpha;
    let inner = integrate_plain(
        |v| f.eval_clamped((x - h * v.powf(inv)).max(a)),
        0.0,
        1.0,
        cfg,
    )?;
    let scale = h.powf(alpha) / specfun::gamma(alpha + 1.0)?;
    Ok(Estimate {
        value: scale * inner.value,
        error: scale * inner.error,
    })
}

/// J_{b-}^α f(x) with its absolute error estimate.
pub fn rl_right_estimate(
    f: &FunctionModel,
    b: f64,
    alpha: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_point(f, b, "b")?;
    check_point(f, x, "x")?;
    if x > b {
        return Err(Error::precondition(format!("right integral needs x ≤ b, got x = {x}, b = {b}")));
    }
    if x == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let h = b - x;
    let inv = 1.0 / alpha;
    let inner = integrate_plain(
        |v| f.eval_clamped((x + h * v.powf(inv)).min(b)),
        0.0,
        1.0,
        cfg,
    )?;
    let scale = h.powf(alpha) / specfun::gamma(alpha + 1.0)?;
    Ok(Estimate {
        value: scale * inner.value,
        error: scale * inner.error,
    })
}

/// Left-sided integral J_{a+}^α f(x).
pub fn rl_left(f: &FunctionModel, a: f64, alpha: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    rl_left_estimate(f, a, alpha, x, cfg).map(|e| e.value)
}

/// Right-sided integral J_{b-}^α f(x).
pub fn rl_right(f: &FunctionModel, b: f64, alpha: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    rl_right_estimate(f, b, alpha, x, cfg).map(|e| e.value)
}

/// Closed form J_{a+}^α of c·(t-a)^e: c·Γ(e+1)/Γ(e+α+1)·(x-a)^(e+α).
pub fn rl_power_rule_oracle(term: &PowerTerm, a: f64, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if term.shift != a {
        return Err(Error::precondition(format!(
            "power-rule oracle needs a term anchored at a = {a}, got shift {}",
            term.shift
        )));
    }
    if term.exponent < 0.0 {
        return Err(Error::precondition(format!(
            "power-rule oracle needs a nonnegative exponent, got {}",
            term.exponent
        )));
    }
    if x < a {
        return Err(Error::precondition(format!("oracle needs a ≤ x, got a = {a}, x = {x}")));
    }
    let e = term.exponent;
    let ratio = specfun::gamma_ratio(e + 1.0, e + alpha + 1.0)?;
    Ok(term.coeff * ratio * (x - a).powf(e + alpha))
}
