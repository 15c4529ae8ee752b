use num_traits::One;

use super::GeomError;
use crate::expr::{parse_expr, vars, ExprError, Rational, RationalExpr, Vars};

/// Local coordinates `x^1..x^n`, identified by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    coords: Vars,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, GeomError> {
        if names.is_empty() {
            return Err(GeomError::InvalidChart(
                "at least one coordinate is required".into(),
            ));
        }
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            let valid = n
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(GeomError::InvalidChart(format!(
                    "`{n}` is not an identifier"
                )));
            }
            if names[..i].iter().any(|m| m.as_ref() == n) {
                return Err(GeomError::InvalidChart(format!(
                    "duplicate coordinate `{n}`"
                )));
            }
        }
        Ok(Chart {
            coords: vars(names),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &Vars {
        &self.coords
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn zero(&self) -> RationalExpr {
        RationalExpr::zero(self.coords.clone())
    }

    pub fn one(&self) -> RationalExpr {
        RationalExpr::one(self.coords.clone())
    }

    pub fn constant(&self, c: Rational) -> RationalExpr {
        RationalExpr::constant(self.coords.clone(), c)
    }

    pub fn int(&self, n: i64) -> RationalExpr {
        RationalExpr::integer(self.coords.clone(), n)
    }

    /// The coordinate function `x^idx`.
    pub fn coord(&self, idx: usize) -> RationalExpr {
        RationalExpr::var(self.coords.clone(), idx)
    }

    pub fn kronecker(&self, i: usize, j: usize) -> RationalExpr {
        if i == j {
            self.constant(Rational::one())
        } else {
            self.zero()
        }
    }

    pub fn parse(&self, source: &str) -> Result<RationalExpr, ExprError> {
        parse_expr(source, &self.coords)
    }

    /// Accepts an expression for use on this chart: either it is already over these
    /// coordinates, or it is a constant.
    pub(crate) fn adopt(&self, e: RationalExpr) -> Result<RationalExpr, GeomError> {
        if e.vars() == &self.coords || e.constant_value().is_some() {
            Ok(e.relabel(&self.coords))
        } else {
            Err(GeomError::ChartMismatch)
        }
    }

    pub(crate) fn same(&self, other: &Chart) -> Result<(), GeomError> {
        if self == other {
            Ok(())
        } else {
            Err(GeomError::ChartMismatch)
        }
    }
}
