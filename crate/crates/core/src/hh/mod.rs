//! Fractional Hermite-Hadamard type identity and bounds.
//!
//! Every bound compares the modulus of
//!
//! L(x) = [(x-a)^α f(a) + (b-x)^α f(b)]/(b-a)
//!        - Γ(α+1)/(b-a)·[J_{x-}^α f(a) + J_{x+}^α f(b)]
//!
//! against a right-hand side built from |f'| at a, x, b (or at the
//! midpoints (x+a)/2, (x+b)/2 for the s-concave case).

mod bounds;
mod constants;
mod identity;
mod sandwich;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

pub use bounds::{
    bound, bound_classical, bound_t21, bound_t22, bound_t23, bound_t24, bound_with_lhs,
    hypothesis_for,
};
pub use constants::{proof_constants, ProofConstants};
pub use identity::{identity_lhs, identity_lhs_estimate, identity_rhs, identity_rhs_estimate};
pub use sandwich::{hh_bounds, hh_sandwich, Sandwich};

use crate::error::{Error, Result};
use crate::funcmodel::{certify, CertificationReport, CertifyConfig, ConvexityMode, FunctionModel};
use crate::quad::QuadratureConfig;

/// Conjugate-exponent tolerance on |1/p + 1/q - 1|.
pub const CONJUGATE_TOL: f64 = 1e-12;

/// Absolute floor of the violation threshold margin < -1e-9·(1 + |rhs|).
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T21,
    T22,
    T23,
    T24,
    C13,
    C14,
    C15,
    C16,
    /// Left inequality of the s-convex Hermite-Hadamard sandwich.
    Hh11Left,
    /// Right inequality of the sandwich.
    Hh11Right,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::T21,
        TheoremId::T22,
        TheoremId::T23,
        TheoremId::T24,
        TheoremId::C13,
        TheoremId::C14,
        TheoremId::C15,
        TheoremId::C16,
        TheoremId::Hh11Left,
        TheoremId::Hh11Right,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::T21 => "T21",
            TheoremId::T22 => "T22",
            TheoremId::T23 => "T23",
            TheoremId::T24 => "T24",
            TheoremId::C13 => "C13",
            TheoremId::C14 => "C14",
            TheoremId::C15 => "C15",
            TheoremId::C16 => "C16",
            TheoremId::Hh11Left => "HH11L",
            TheoremId::Hh11Right => "HH11R",
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, TheoremId::C13 | TheoremId::C14 | TheoremId::C15 | TheoremId::C16)
    }

    pub fn is_sandwich(&self) -> bool {
        matches!(self, TheoremId::Hh11Left | TheoremId::Hh11Right)
    }

    /// Whether the bound reads the Hölder exponents.
    pub fn uses_q(&self) -> bool {
        matches!(
            self,
            TheoremId::T22
                | TheoremId::T23
                | TheoremId::T24
                | TheoremId::C14
                | TheoremId::C15
                | TheoremId::C16
        )
    }

    /// The fractional counterpart of a classical bound.
    pub fn fractional_of(&self) -> Option<TheoremId> {
        match self {
            TheoremId::C13 => Some(TheoremId::T21),
            TheoremId::C14 => Some(TheoremId::T22),
            TheoremId::C15 => Some(TheoremId::T23),
            TheoremId::C16 => Some(TheoremId::T24),
            _ => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::precondition(format!("unknown theorem id '{s}'")))
    }
}

/// Parameters a, b, x, α, s, p, q together with the function f.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub f: FunctionModel,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub alpha: f64,
    pub s: f64,
    pub p: Option<f64>,
    pub q: Option<f64>,
}

impl ProblemInstance {
    pub fn new(f: FunctionModel, a: f64, b: f64, x: f64, alpha: f64, s: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::precondition(format!("need a < b, got a = {a}, b = {b}")));
        }
        if a < f.lo() || b > f.hi() {
            return Err(Error::domain(format!(
                "[{a}, {b}] is not inside the function domain [{}, {}]",
                f.lo(),
                f.hi()
            )));
        }
        if !(x >= a && x <= b) {
            return Err(Error::precondition(format!("x = {x} must lie in [{a}, {b}]")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::precondition(format!("alpha must be positive, got {alpha}")));
        }
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::precondition(format!("s must lie in (0, 1], got {s}")));
        }
        Ok(Self { f, a, b, x, alpha, s, p: None, q: None })
    }

    /// Sets q ≥ 1 and derives p = q/(q-1) (infinite at q = 1).
    pub fn with_q(mut self, q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::precondition(format!("q must be at least 1, got {q}")));
        }
        self.q = Some(q);
        self.p = Some(if q == 1.0 { f64::INFINITY } else { q / (q - 1.0) });
        Ok(self)
    }

    /// Sets both exponents, enforcing 1/p + 1/q = 1.
    pub fn with_exponents(mut self, p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0) {
            return Err(Error::precondition(format!("need p, q > 1, got p = {p}, q = {q}")));
        }
        let gap = (1.0 / p + 1.0 / q - 1.0).abs();
        if gap > CONJUGATE_TOL {
            return Err(Error::precondition(format!(
                "p = {p} and q = {q} are not conjugate (|1/p + 1/q - 1| = {gap:e})"
            )));
        }
        self.p = Some(p);
        self.q = Some(q);
        Ok(self)
    }

    /// q, requiring at least `min` (strictly greater when `strict`).
    pub(crate) fn require_q(&self, strict: bool) -> Result<f64> {
        let q = self
            .q
            .ok_or_else(|| Error::precondition("this bound needs the exponent q"))?;
        if strict && q <= 1.0 {
            return Err(Error::precondition(format!("this bound needs q > 1, got {q}")));
        }
        Ok(q)
    }

    pub(crate) fn require_p(&self) -> Result<f64> {
        match self.p {
            Some(p) if p.is_finite() && p > 1.0 => Ok(p),
            _ => Err(Error::precondition("this bound needs a finite exponent p > 1")),
        }
    }
}

/// Outcome of evaluating one inequality on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ratio: f64,
    pub params: ProblemInstance,
    pub hypothesis_certified: bool,
    /// Quadrature error estimate attached to lhs.
    pub quad_error_est: f64,
}

impl BoundReport {
    pub(crate) fn new(
        theorem: TheoremId,
        lhs: f64,
        rhs: f64,
        params: ProblemInstance,
        hypothesis_certified: bool,
        quad_error_est: f64,
    ) -> Self {
        Self {
            theorem,
            lhs,
            rhs,
            margin: rhs - lhs,
            ratio: tightness_ratio(lhs, rhs),
            params,
            hypothesis_certified,
            quad_error_est,
        }
    }

    /// margin < -1e-9·(1 + |rhs|).
    pub fn is_violation(&self) -> bool {
        is_violation(self.margin, self.rhs)
    }
}

pub fn is_violation(margin: f64, rhs: f64) -> bool {
    margin < -VIOLATION_TOL * (1.0 + rhs.abs()) || margin.is_nan()
}

/// lhs/rhs. A zero right-hand side gives 0 when lhs is within the
/// violation threshold and +∞ otherwise.
pub fn tightness_ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs != 0.0 {
        lhs / rhs
    } else if lhs.abs() <= VIOLATION_TOL {
        0.0
    } else {
        f64::INFINITY
    }
}

/// What a theorem assumes about f: the function g whose s-convexity or
/// s-concavity must hold on [a, b].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypothesisTarget {
    /// g = f itself.
    Function,
    /// g = |f'|^power.
    DerivativePower(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hypothesis {
    pub target: HypothesisTarget,
    pub mode: ConvexityMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CertKey {
    model: String,
    s: u64,
    power: Option<u64>,
    mode: ConvexityMode,
}

/// Quadrature and certification settings shared by a batch of evaluations,
/// with a cache of certification verdicts.
#[derive(Debug, Default)]
pub struct Evaluator {
    pub quad: QuadratureConfig,
    pub cert: CertifyConfig,
    cache: Mutex<HashMap<CertKey, Arc<CertificationReport>>>,
}

impl Evaluator {
    pub fn new(quad: QuadratureConfig, cert: CertifyConfig) -> Self {
        Self { quad, cert, cache: Mutex::new(HashMap::new()) }
    }

    /// Certifies a hypothesis on [a, b], reusing earlier verdicts.
    pub fn certify_hypothesis(
        &self,
        hyp: Hypothesis,
        f: &FunctionModel,
        a: f64,
        b: f64,
        s: f64,
    ) -> Result<Arc<CertificationReport>> {
        let on_ab = f.restrict(a, b)?;
        let key = CertKey {
            model: on_ab.to_string(),
            s: s.to_bits(),
            power: match hyp.target {
                HypothesisTarget::Function => None,
                HypothesisTarget::DerivativePower(k) => Some(k.to_bits()),
            },
            mode: hyp.mode,
        };
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let report = match hyp.target {
            HypothesisTarget::Function => {
                certify(|u| on_ab.eval_clamped(u), a, b, s, hyp.mode, &self.cert)?
            }
            HypothesisTarget::DerivativePower(k) => {
                let fp = on_ab.derivative()?;
                certify(|u| fp.eval_clamped(u).abs().powf(k), a, b, s, hyp.mode, &self.cert)?
            }
        };
        let report = Arc::new(report);
        self.cache
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&report));
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::parse_function;

    fn sq() -> FunctionModel {
        parse_function("1*(u-0)^2 on [0,1]").unwrap()
    }

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("t21".parse::<TheoremId>().unwrap(), TheoremId::T21);
        assert!("T99".parse::<TheoremId>().is_err());
    }

    #[test]
    fn instance_invariants() {
        assert!(ProblemInstance::new(sq(), 0.0, 1.0, 0.5, 1.0, 1.0).is_ok());
        assert!(ProblemInstance::new(sq(), 1.0, 0.0, 0.5, 1.0, 1.0).is_err());
        assert!(ProblemInstance::new(sq(), 0.0, 1.0, 2.0, 1.0, 1.0).is_err());
        assert!(ProblemInstance::new(sq(), 0.0, 2.0, 0.5, 1.0, 1.0).is_err());
        assert!(ProblemInstance::new(sq(), 0.0, 1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ProblemInstance::new(sq(), 0.0, 1.0, 0.5, 1.0, 0.0).is_err());
        assert!(ProblemInstance::new(sq(), 0.0, 1.0, 0.5, 1.0, 1.1).is_err());
    }

    #[test]
    fn exponents() {
        let base = ProblemInstance::new(sq(), 0.0, 1.0, 0.5, 1.0, 1.0).unwrap();
        let i = base.clone().with_q(3.0).unwrap();
        assert_eq!(i.p, Some(1.5));
        let i = base.clone().with_q(1.0).unwrap();
        assert_eq!(i.p, Some(f64::INFINITY));
        assert!(i.require_p().is_err());
        assert!(base.clone().with_q(0.5).is_err());
        assert!(base.clone().with_exponents(2.0, 2.0).is_ok());
        assert!(base.clone().with_exponents(3.0, 1.5).is_ok());
        assert!(base.clone().with_exponents(2.0, 2.0 + 1e-9).is_err());
        assert!(base.require_q(false).is_err());
    }

    #[test]
    fn ratio_rules() {
        assert_eq!(tightness_ratio(1.0, 1.0), 1.0);
        assert_eq!(tightness_ratio(0.0, 0.0), 0.0);
        assert_eq!(tightness_ratio(1e-17, 0.0), 0.0);
        assert_eq!(tightness_ratio(1e-3, 0.0), f64::INFINITY);
        assert!(!is_violation(-1e-10, 0.0));
        assert!(is_violation(-1e-8, 0.0));
        assert!(is_violation(f64::NAN, 1.0));
    }

    #[test]
    fn certification_cache_reuses_reports() {
        let ev = Evaluator::default();
        let hyp = Hypothesis {
            target: HypothesisTarget::DerivativePower(1.0),
            mode: ConvexityMode::Convex,
        };
        let r1 = ev.certify_hypothesis(hyp, &sq(), 0.0, 1.0, 0.5).unwrap();
        let r2 = ev.certify_hypothesis(hyp, &sq(), 0.0, 1.0, 0.5).unwrap();
        assert!(Arc::ptr_eq(&r1, &r2));
        assert!(r1.pass);
    }
}
