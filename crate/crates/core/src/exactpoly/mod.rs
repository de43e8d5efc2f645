//! Exact sparse multivariate polynomials.

mod poly;
mod ring;
mod text;

pub use poly::{Monomial, MultiPoly};
pub use ring::{gauss, gauss_to_rat, rat_to_gauss, Coeff, GaussInt, GaussRat, ImaginaryUnit, UQuot};
pub use text::{from_text, to_text};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("exponent vector has {found} entries, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("polynomial is not divisible by a power of `{0}`")]
    NotDivisible(String),
    #[error("polynomial involves variables other than `{0}`")]
    NotUnivariate(String),
    #[error("coefficient outside the target domain: {0}")]
    Domain(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
