use std::fmt;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("derivative is unbounded at the left edge of [{lo}, {hi}] (term {term}); shrink the domain")]
    Singular { term: String, lo: f64, hi: f64 },

    #[error("quadrature tolerance not met: estimated error {estimate:e} > target {target:e} after {panels} panels")]
    Tolerance {
        estimate: f64,
        target: f64,
        panels: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }

    pub(crate) fn precondition(msg: impl fmt::Display) -> Self {
        Error::Precondition(msg.to_string())
    }
}
