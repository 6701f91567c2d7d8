//! Exact sparse multivariate polynomial arithmetic over the rationals.
//!
//! A [`RingContext`] declares an ordered list of *main variables* (the
//! geometric variables that carry degree) and an ordered list of *parameters*
//! (symbolic coefficients of weight zero). [`Polynomial`] values are sparse
//! maps from monomials to [`Scalar`] coefficients, kept in canonical form:
//! no zero coefficients, coefficients in lowest terms, and terms ordered
//! graded-lexicographically over the declared symbol order.

mod context;
mod monomial;
mod parse;
mod poly;

pub use context::RingContext;
pub use monomial::Monomial;
pub use parse::parse;
pub use poly::Polynomial;

use std::fmt;

/// Exact rational coefficient. `BigRational` already maintains the invariants
/// we need: lowest terms, positive denominator, canonical zero.
pub type Scalar = num_rational::BigRational;

/// Build a scalar from an integer.
pub fn scalar_int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Build a scalar from a numerator/denominator pair.
pub fn scalar_ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(num.into(), den.into())
}

/// Errors from polynomial construction, parsing and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Malformed expression syntax; `offset` is a byte offset into the input.
    Parse { offset: usize, message: String },
    /// A symbol not declared in the ring context.
    UnknownSymbol { name: String, offset: usize },
    /// `^` followed by a negative exponent.
    NegativeExponent { offset: usize },
    /// Two operands live in different ring contexts.
    ContextMismatch,
    DivisionByZero,
    /// `exact_divide` left a nonzero remainder.
    DivisionNotExact,
    /// An operation that needs a main variable was given a parameter or an
    /// undeclared name.
    NotMainVariable { name: String },
    /// Invalid ring-context declaration (duplicate names, bad split, ...).
    InvalidContext(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::Parse { offset, message } => {
                write!(f, "parse error at byte {offset}: {message}")
            }
            PolyError::UnknownSymbol { name, offset } => {
                write!(f, "unknown symbol `{name}` at byte {offset}")
            }
            PolyError::NegativeExponent { offset } => {
                write!(f, "negative exponent at byte {offset}")
            }
            PolyError::ContextMismatch => write!(f, "operands come from different ring contexts"),
            PolyError::DivisionByZero => write!(f, "division by zero polynomial"),
            PolyError::DivisionNotExact => write!(f, "polynomial division is not exact"),
            PolyError::NotMainVariable { name } => {
                write!(f, "`{name}` is not a main variable of the context")
            }
            PolyError::InvalidContext(msg) => write!(f, "invalid ring context: {msg}"),
        }
    }
}

impl std::error::Error for PolyError {}
