//! Euler Gamma and Beta functions on the positive real axis.
//!
//! Gamma uses the Lanczos approximation with Pugh's coefficients
//! (r = 10.900511, 11 terms) on [1, 2) and the recurrence elsewhere, which
//! keeps the relative error near 1e-15 across (0, 171.6]. Small integer
//! arguments are served from an exact factorial table. Ratios of Gamma values switch to log-space once
//! any argument gets large enough that a direct quotient could overflow.

use std::f64::consts::E;

use crate::error::{Error, Result};

const LANCZOS_R: f64 = 10.900511;

#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// 2·sqrt(e/π)
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// Largest argument for which Γ(x) is finite in f64.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// (n-1)! for n = 1..=23, all exactly representable.
const FACTORIALS: [f64; 23] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("{name} requires a positive argument, got {x}")));
    }
    Ok(())
}

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |acc, (i, &dk)| acc + dk / (x + i as f64 - 1.0))
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    if x.fract() == 0.0 && x <= FACTORIALS.len() as f64 {
        return Ok(FACTORIALS[x as usize - 1]);
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x}) exceeds the f64 range")));
    }
    if x < 1.0 {
        return Ok(gamma(x + 1.0)? / x);
    }
    if x >= 2.0 {
        // Γ(x) = (x-1)(x-2)...(x-n)·Γ(x-n) with x-n in [1, 2). Each x-k is
        // exact, so the product accumulates at most n roundings.
        let n = x.floor() as usize - 1;
        let z = x - n as f64;
        let product = (1..=n).fold(1.0, |acc, k| acc * (x - k as f64));
        return Ok(lanczos_gamma(z) * product);
    }
    Ok(lanczos_gamma(x))
}

fn lanczos_gamma(x: f64) -> f64 {
    let base = (x - 0.5 + LANCZOS_R) / E;
    lanczos_sum(x) * TWO_SQRT_E_OVER_PI * base.powf(x - 0.5)
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    if x < 0.5 {
        return Ok(log_gamma(x + 1.0)? - x.ln());
    }
    if x < 150.0 {
        return Ok(gamma(x)?.ln());
    }
    Ok((lanczos_sum(x) * TWO_SQRT_E_OVER_PI).ln() + (x - 0.5) * ((x - 0.5 + LANCZOS_R).ln() - 1.0))
}

/// Γ(num) / Γ(den), evaluated in log-space when either argument is large.
pub fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    check_positive("gamma_ratio", num)?;
    check_positive("gamma_ratio", den)?;
    if num < 150.0 && den < 150.0 {
        return Ok(gamma(num)? / gamma(den)?);
    }
    let value = (log_gamma(num)? - log_gamma(den)?).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("gamma({num})/gamma({den}) exceeds the f64 range")))
    }
}

/// Euler Beta function B(x, y) = Γ(x)Γ(y)/Γ(x+y).
///
/// Uses the standard integrand t^(x-1)(1-t)^(y-1).
pub fn beta(x: f64, y: f64) -> Result<f64> {
    check_positive("beta", x)?;
    check_positive("beta", y)?;
    if x + y < 150.0 {
        return Ok(gamma(x)? * gamma(y)? / gamma(x + y)?);
    }
    Ok((log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?).exp())
}
