//! Riemann-Liouville fractional integrals and numerical verification of
//! Hermite-Hadamard type inequalities for s-convex and s-concave functions.
//!
//! - [`specfun`]: Gamma, log-Gamma and Beta on the positive axis.
//! - [`funcmodel`]: power-term test functions, their parser, exact
//!   derivatives and sampled s-convexity certification.
//! - [`quad`]: adaptive Gauss-Legendre integration.
//! - [`rlint`]: left/right fractional integrals and the power-rule oracle.
//! - [`hh`]: the fractional identity, the bounds, their classical
//!   counterparts and the s-convex sandwich.
//! - [`sweep`]: parameter-grid verification with CSV output.
//! - [`cli`]: the `fracineq` command line.

// `!(a < b)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Test reference values keep all the digits they were computed to.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cli;
pub mod error;
pub mod funcmodel;
pub mod hh;
pub mod quad;
pub mod rlint;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
pub use funcmodel::{parse_function, FunctionModel, PowerTerm};
pub use quad::QuadratureConfig;
