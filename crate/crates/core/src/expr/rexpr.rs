use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{gcd, Polynomial};
use super::{ExprError, Rational, Vars};

/// Canonical quotient of two polynomials: `gcd(num, den) = 1` and `den` is monic under
/// graded-lex order. Structural equality is therefore equality of rational functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn zero(vars: Vars) -> Self {
        RationalExpr {
            num: Polynomial::zero(vars.clone()),
            den: Polynomial::one(vars),
        }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: Vars, c: Rational) -> Self {
        RationalExpr {
            num: Polynomial::constant(vars.clone(), c),
            den: Polynomial::one(vars),
        }
    }

    pub fn integer(vars: Vars, n: i64) -> Self {
        Self::constant(vars, Rational::from_integer(n.into()))
    }

    pub fn var(vars: Vars, idx: usize) -> Self {
        RationalExpr {
            num: Polynomial::var(vars.clone(), idx),
            den: Polynomial::one(vars),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let vars = p.vars().clone();
        RationalExpr {
            num: p,
            den: Polynomial::one(vars),
        }
    }

    /// Reduces `num / den` to canonical form.
    pub fn from_parts(num: Polynomial, den: Polynomial) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.vars().clone()));
        }
        if let Some(c) = den.constant_value() {
            let vars = num.vars().clone();
            return Ok(RationalExpr {
                num: num.scale(&c.recip()),
                den: Polynomial::one(vars),
            });
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().expect("nonzero").recip();
        Ok(RationalExpr {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    /// Canonical form of `num / den` when the caller knows the two are coprime.
    fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars().clone());
        }
        let lc = den.leading_coefficient().expect("nonzero").recip();
        if lc.is_one() {
            return RationalExpr { num, den };
        }
        RationalExpr {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    /// `a/da + sign * b/db`; only the gcd of the denominators can cancel against the sum.
    fn add_signed(a: &Self, b: &Self, negate: bool) -> Self {
        let nb = if negate { b.num.neg() } else { b.num.clone() };
        if a.den == b.den {
            return Self::from_parts(a.num.add(&nb), a.den.clone()).expect("nonzero denominator");
        }
        let g = gcd(&a.den, &b.den);
        if g.is_one() {
            return Self::from_coprime(a.num.mul(&b.den).add(&nb.mul(&a.den)), a.den.mul(&b.den));
        }
        let da = a.den.exact_div(&g).expect("gcd divides");
        let db = b.den.exact_div(&g).expect("gcd divides");
        let num = a.num.mul(&db).add(&nb.mul(&da));
        let h = gcd(&num, &g);
        if h.is_one() {
            return Self::from_coprime(num, da.mul(&b.den));
        }
        Self::from_coprime(
            num.exact_div(&h).expect("gcd divides"),
            da.mul(&b.den).exact_div(&h).expect("gcd divides"),
        )
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value of a constant expression.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Whether coordinate `idx` occurs in the numerator or denominator.
    pub fn depends_on(&self, idx: usize) -> bool {
        self.num.contains_var(idx) || self.den.contains_var(idx)
    }

    fn var_index(&self, name: &str) -> Result<usize, ExprError> {
        self.vars()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ExprError::UnknownCoordinate(name.to_string()))
    }

    /// Brings two operands onto a common variable list. A constant may be moved to any list;
    /// two non-constant expressions over different lists are a caller bug.
    fn align(&self, other: &Self) -> (Self, Self) {
        if self.vars() == other.vars() {
            return (self.clone(), other.clone());
        }
        if let Some(c) = self.constant_value() {
            return (Self::constant(other.vars().clone(), c), other.clone());
        }
        if let Some(c) = other.constant_value() {
            return (self.clone(), Self::constant(self.vars().clone(), c));
        }
        panic!(
            "expressions over different coordinate lists: {:?} vs {:?}",
            self.vars(),
            other.vars()
        );
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let (a, b) = self.align(rhs);
        Self::from_parts(a.num.mul(&b.den), a.den.mul(&b.num))
    }

    pub fn recip(&self) -> Result<Self, ExprError> {
        Self::one(self.vars().clone()).checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        // numerator and denominator stay coprime under powers
        RationalExpr {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars().clone());
        }
        RationalExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Partial derivative with respect to coordinate index `idx`.
    pub fn derivative(&self, idx: usize) -> Self {
        assert!(idx < self.vars().len(), "coordinate index out of range");
        if self.den.is_one() {
            return Self::from_polynomial(self.num.derivative(idx));
        }
        if !self.depends_on(idx) {
            return Self::zero(self.vars().clone());
        }
        // (n/d)' = (n'd - nd')/d^2
        let dd = self.den.derivative(idx);
        let g = gcd(&self.den, &dd);
        if g.is_one() {
            // every factor of the denominator is simple in `idx`, so nothing cancels
            let n = self
                .num
                .derivative(idx)
                .mul(&self.den)
                .sub(&self.num.mul(&dd));
            return Self::from_coprime(n, self.den.mul(&self.den));
        }
        let d0 = self.den.exact_div(&g).expect("gcd divides");
        let n = self
            .num
            .derivative(idx)
            .mul(&d0)
            .sub(&self.num.mul(&dd.exact_div(&g).expect("gcd divides")));
        Self::from_parts(n, self.den.mul(&d0)).expect("denominator is nonzero")
    }

    /// Partial derivative with respect to a named coordinate.
    pub fn partial(&self, coordinate: &str) -> Result<Self, ExprError> {
        Ok(self.derivative(self.var_index(coordinate)?))
    }

    /// Exact value at a point given in coordinate order.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, ExprError> {
        if point.len() != self.vars().len() {
            return Err(ExprError::PointArity {
                expected: self.vars().len(),
                got: point.len(),
            });
        }
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(ExprError::Pole);
        }
        Ok(self.num.evaluate(point) / d)
    }

    /// Exact value at a point given as a coordinate-name map; every coordinate must be assigned.
    pub fn evaluate_named<'a, I>(&self, assignment: I) -> Result<Rational, ExprError>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut point: Vec<Option<Rational>> = vec![None; self.vars().len()];
        for (name, value) in assignment {
            let idx = self.var_index(name)?;
            point[idx] = Some(value);
        }
        let point = point
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ExprError::MissingValue(self.vars()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate(&point)
    }

    /// Replaces coordinate `idx` by a rational constant.
    pub fn substitute(&self, idx: usize, value: &Rational) -> Result<Self, ExprError> {
        let den = self.den.substitute(idx, value);
        if den.is_zero() {
            return Err(ExprError::Pole);
        }
        Self::from_parts(self.num.substitute(idx, value), den)
    }

    /// Moves the expression onto another variable list with the same names in the same order.
    pub(crate) fn relabel(self, vars: &Vars) -> Self {
        if self.vars() == vars {
            return RationalExpr {
                num: self.num.with_vars(vars.clone()),
                den: self.den.with_vars(vars.clone()),
            };
        }
        let num = self
            .num
            .retarget_constant(vars)
            .expect("relabel requires identical coordinates or a constant");
        let den = self
            .den
            .retarget_constant(vars)
            .expect("relabel requires identical coordinates or a constant");
        RationalExpr { num, den }
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if self.den.single_factor() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: &RationalExpr) -> RationalExpr {
                let (a, b) = self.align(rhs);
                let f: fn(RationalExpr, RationalExpr) -> RationalExpr = $body;
                f(a, b)
            }
        }
        impl $trait<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$method(rhs)
            }
        }
        impl $trait<RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| RationalExpr::add_signed(&a, &b, false));

binop!(Sub, sub, |a, b| RationalExpr::add_signed(&a, &b, true));

binop!(Mul, mul, |a, b| {
    if a.den.is_one() && b.den.is_one() {
        return RationalExpr::from_polynomial(a.num.mul(&b.num));
    }
    if a.is_zero() || b.is_zero() {
        return RationalExpr::zero(a.vars().clone());
    }
    // cross-cancel so that the product of reduced fractions stays reduced
    let cancel = |n: &Polynomial, d: &Polynomial| {
        let g = gcd(n, d);
        if g.is_one() {
            (n.clone(), d.clone())
        } else {
            (
                n.exact_div(&g).expect("gcd divides"),
                d.exact_div(&g).expect("gcd divides"),
            )
        }
    };
    let (na, db) = cancel(&a.num, &b.den);
    let (nb, da) = cancel(&b.num, &a.den);
    RationalExpr::from_coprime(na.mul(&nb), da.mul(&db))
});

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

/// Sums expressions over `vars`; the empty sum is zero.
pub fn sum<I>(vars: &Vars, items: I) -> RationalExpr
where
    I: IntoIterator<Item = RationalExpr>,
{
    items
        .into_iter()
        .fold(RationalExpr::zero(vars.clone()), |acc, x| acc + x)
}
