//! Test functions f built from shifted power terms `c·(u - shift)^e`.
//!
//! Models carry their closed domain [lo, hi] and differentiate exactly by
//! the power rule, so every theorem can be fed both f and f' without
//! finite differences.

mod certify;
mod parse;

use std::fmt;

pub use certify::{
    certify, certify_s_concave, certify_s_convex, CertificationReport, CertifyConfig,
    ConvexityMode, Witness,
};
pub use parse::{parse_float, parse_function};

use crate::error::{Error, Result};

/// One term `coeff·(u - shift)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub shift: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, shift: f64, exponent: f64) -> Self {
        Self { coeff, shift, exponent }
    }

    fn is_integer_exponent(&self) -> bool {
        self.exponent.fract() == 0.0
    }

    /// Value at u; the caller guarantees u lies where the term is defined.
    #[inline]
    pub fn value(&self, u: f64) -> f64 {
        if self.exponent == 0.0 {
            return self.coeff;
        }
        self.coeff * (u - self.shift).powf(self.exponent)
    }

    fn check_defined_on(&self, lo: f64, hi: f64) -> Result<()> {
        if !(self.coeff.is_finite() && self.shift.is_finite() && self.exponent.is_finite()) {
            return Err(Error::domain(format!("non-finite term {self}")));
        }
        if !self.is_integer_exponent() && self.shift > lo {
            return Err(Error::domain(format!(
                "term {self} is undefined left of u={} but the domain starts at {lo}",
                self.shift
            )));
        }
        if self.exponent < 0.0 && self.shift >= lo && self.shift <= hi {
            return Err(Error::domain(format!(
                "term {self} has a pole at u={} inside [{lo}, {hi}]",
                self.shift
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}*(u-{:?})^{:?}", self.coeff, self.shift, self.exponent)
    }
}

/// Sum of power terms on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionModel {
    terms: Vec<PowerTerm>,
    lo: f64,
    hi: f64,
}

impl FunctionModel {
    /// Builds a model, checking that every term is defined on [lo, hi].
    pub fn new(terms: Vec<PowerTerm>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain(format!("invalid domain [{lo}, {hi}]")));
        }
        for term in &terms {
            term.check_defined_on(lo, hi)?;
        }
        Ok(Self { terms, lo, hi })
    }

    /// c on [lo, hi].
    pub fn constant(c: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![PowerTerm::new(c, 0.0, 0.0)], lo, hi)
    }

    /// c·(u - lo)^e on [lo, hi].
    pub fn monomial(c: f64, e: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![PowerTerm::new(c, lo, e)], lo, hi)
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.lo && u <= self.hi
    }

    /// f(u), rejecting points outside the domain.
    pub fn evaluate(&self, u: f64) -> Result<f64> {
        if !self.contains(u) {
            return Err(Error::domain(format!(
                "u = {u} lies outside [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(self.eval_in_domain(u))
    }

    #[inline]
    pub(crate) fn eval_in_domain(&self, u: f64) -> f64 {
        self.terms.iter().map(|t| t.value(u)).sum()
    }

    /// f evaluated after clamping u into the domain; for points that are
    /// mathematically inside but may have drifted by rounding.
    #[inline]
    pub(crate) fn eval_clamped(&self, u: f64) -> f64 {
        self.eval_in_domain(u.clamp(self.lo, self.hi))
    }

    /// The same terms on a narrower (or equal) domain.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self> {
        if lo < self.lo || hi > self.hi {
            return Err(Error::domain(format!(
                "[{lo}, {hi}] is not inside [{}, {}]",
                self.lo, self.hi
            )));
        }
        Self::new(self.terms.clone(), lo, hi)
    }

    /// True when some term has 0 < e < 1 anchored at the left edge, so f'
    /// blows up there.
    pub fn has_singular_derivative(&self) -> bool {
        self.singular_term().is_some()
    }

    fn singular_term(&self) -> Option<&PowerTerm> {
        self.terms
            .iter()
            .find(|t| t.exponent > 0.0 && t.exponent < 1.0 && t.shift >= self.lo)
    }

    /// Term-wise power rule. Zero-exponent terms vanish.
    pub fn derivative(&self) -> Result<Self> {
        if let Some(term) = self.singular_term() {
            return Err(Error::Singular {
                term: term.to_string(),
                lo: self.lo,
                hi: self.hi,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponent != 0.0 && t.coeff != 0.0)
            .map(|t| PowerTerm::new(t.coeff * t.exponent, t.shift, t.exponent - 1.0))
            .collect();
        Self::new(terms, self.lo, self.hi)
    }

    /// Domain with the left edge pulled in by 1e-9 of the width when f' is
    /// singular there; `None` when no shrink is needed.
    pub fn shrink_for_derivative(&self) -> Result<Option<Self>> {
        if !self.has_singular_derivative() {
            return Ok(None);
        }
        let lo = self.lo + 1e-9 * (self.hi - self.lo);
        Ok(Some(Self::new(self.terms.clone(), lo, self.hi)?))
    }
}

impl fmt::Display for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0.0*(u-0.0)^0.0")?;
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{term}")?;
        }
        write!(f, " on [{:?},{:?}]", self.lo, self.hi)
    }
}
