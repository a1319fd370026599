use crate::error::{Error, Result};
use crate::specfun;

/// Closed forms of the three weight integrals used by the bounds:
///
/// c1 = ∫_0^1 (1 - t^α) t^s dt       = α / ((s+1)(α+s+1))
/// c2 = ∫_0^1 (1 - t^α)(1 - t)^s dt  = 1/(s+1) - Γ(α+1)Γ(s+1)/Γ(α+s+2)
/// c3 = ∫_0^1 (1 - t^α)^p dt         = Γ(1+p)Γ(1+1/α)/Γ(1+p+1/α)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

pub fn proof_constants(alpha: f64, s: f64, p: f64) -> Result<ProofConstants> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("s must lie in (0, 1], got {s}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must be at least 1, got {p}")));
    }
    Ok(ProofConstants {
        c1: weight_c1(alpha, s),
        c2: weight_c2(alpha, s)?,
        c3: weight_c3(alpha, p)?,
    })
}

pub(crate) fn weight_c1(alpha: f64, s: f64) -> f64 {
    alpha / ((s + 1.0) * (alpha + s + 1.0))
}

pub(crate) fn weight_c2(alpha: f64, s: f64) -> Result<f64> {
    Ok(1.0 / (s + 1.0) - specfun::beta(alpha + 1.0, s + 1.0)?)
}

pub(crate) fn weight_c3(alpha: f64, p: f64) -> Result<f64> {
    let inv = 1.0 / alpha;
    Ok(specfun::gamma(1.0 + p)? * specfun::gamma_ratio(1.0 + inv, 1.0 + p + inv)?)
}
