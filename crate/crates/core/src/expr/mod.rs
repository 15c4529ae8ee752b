//! Exact scalar kernel: multivariate rational functions with rational coefficients.

mod parse;
mod poly;
mod rexpr;

use std::sync::Arc;

use thiserror::Error;

pub use parse::parse_expr;
pub use poly::{gcd, Monomial, Polynomial};
pub use rexpr::{sum, RationalExpr};

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Ordered coordinate names shared by every expression on a chart.
pub type Vars = Arc<[String]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("exponent at offset {pos} does not fit in a machine word")]
    ExponentOverflow { pos: usize },
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("no value given for coordinate `{0}`")]
    MissingValue(String),
    #[error("evaluation point has {got} values, expected {expected}")]
    PointArity { expected: usize, got: usize },
}

/// Builds a shared variable list from names.
pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names
        .iter()
        .map(|s| s.as_ref().to_string())
        .collect::<Vec<_>>()
        .into()
}

/// Parses a rational literal such as `3`, `-2/7`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d == 0.into() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}
