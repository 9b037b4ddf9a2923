//! Exact beta-graded operator algebra with exponential-polynomial coefficients.
//!
//! Generators are `b` (beta, with `b^2 = 1`), the odd `O` and the even `E`, `F`.
//! The only relations are `b O = -O b`, `b E = E b`, `b F = F b`; words are kept with
//! beta on the left. Every generator is self-adjoint.

mod expoly;
mod expr;
mod json;
mod parse;
mod word;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

pub use expoly::ExpPoly;
pub use expr::{normalize, OperatorExpr, RawFactor};
pub use json::{from_json, to_json, ExprJson, TermJson};
pub use parse::parse;
pub use word::{Generator, Word};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("coefficient grows without bound (s-degree {degree} at zero decay)")]
    NonConvergent { degree: usize },
    #[error("coefficient of {word} grows without bound (s-degree {degree} at zero decay)")]
    NonConvergentTerm { word: String, degree: usize },
    #[error("cannot substitute {from:?} by {to:?}: parities differ")]
    ParityMismatch { from: Generator, to: Generator },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed expression JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: found {}, expected one of {}",
            self.line,
            self.column,
            self.found,
            self.expected.join(", ")
        )
    }
}
