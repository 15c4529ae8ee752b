//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so the leading term is always the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, Vars};

/// Exponent vector, one entry per chart variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    fn common_part(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    // graded lexicographic: total degree first, then the first variable is most significant
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over the rationals in a fixed ordered list of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: Vars) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: Rational) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(vars: Vars) -> Self {
        Polynomial::constant(vars, Rational::one())
    }

    pub fn var(vars: Vars, idx: usize) -> Self {
        let mut p = Polynomial::zero(vars);
        let n = p.vars.len();
        p.terms.insert(Monomial::var(n, idx), Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; zero coefficients are dropped
    /// and repeated monomials are summed.
    pub fn from_terms<I>(vars: Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), p.vars.len(), "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// Whether variable `idx` occurs in some term.
    pub fn contains_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    /// Highest-index variable occurring in the polynomial.
    pub(crate) fn top_var(&self) -> Option<usize> {
        (0..self.nvars()).rev().find(|&i| self.contains_var(i))
    }

    /// Re-labels the polynomial with a different, equally long, variable list.
    pub(crate) fn with_vars(mut self, vars: Vars) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        self.vars = vars;
        self
    }

    /// Constant polynomial carried over to another variable list.
    pub(crate) fn retarget_constant(&self, vars: &Vars) -> Option<Self> {
        self.constant_value()
            .map(|c| Polynomial::constant(vars.clone(), c))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_vars(other);
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_vars(other);
        let mut out = Polynomial::zero(self.vars.clone());
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars.clone());
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, idx: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes a rational value for variable `idx`; the variable list is unchanged.
    pub fn substitute(&self, idx: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut exps = m.0.clone();
            exps[idx] = 0;
            let factor = num_traits::pow(value.clone(), e as usize);
            out.add_term(Monomial(exps), c * factor);
        }
        out
    }

    /// Coefficients with respect to variable `idx`: entry `d` is the coefficient of `x_idx^d`.
    pub fn coefficients_in(&self, idx: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![Polynomial::zero(self.vars.clone()); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            let mut exps = m.0.clone();
            exps[idx] = 0;
            out[e].add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Scales so that the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        self.check_vars(divisor);
        let (lm_d, lc_d) = divisor.leading_term()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut quot = Polynomial::zero(self.vars.clone());
        let mut rem = self.clone();
        while let Some((lm_r, lc_r)) = rem.leading_term() {
            if !lm_d.divides(lm_r) {
                return None;
            }
            let m = lm_r.div(lm_d);
            let c = lc_r / lc_d;
            rem = rem.sub(&divisor.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `divisor` viewed as univariate polynomials in `idx`.
    fn pseudo_rem(&self, divisor: &Polynomial, idx: usize) -> Polynomial {
        let db = divisor.degree_in(idx);
        let coeffs_b = divisor.coefficients_in(idx);
        let lc_b = &coeffs_b[db as usize];
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(idx);
            if dr < db {
                return r;
            }
            let lc_r = r.coefficients_in(idx).swap_remove(dr as usize);
            let mut shift = vec![0; self.nvars()];
            shift[idx] = dr - db;
            let t = lc_r.mul_term(&Monomial(shift.into_boxed_slice()), &Rational::one());
            r = lc_b.mul(&r).sub(&t.mul(divisor));
        }
    }

    /// Monic gcd of the coefficients with respect to variable `idx`.
    fn content_in(&self, idx: usize) -> Polynomial {
        let mut g = Polynomial::zero(self.vars.clone());
        for c in self.coefficients_in(idx) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part(&self, idx: usize) -> Polynomial {
        let c = self.content_in(idx);
        self.exact_div(&c)
            .expect("content divides the polynomial")
            .monic()
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it
            .next()
            .cloned()
            .unwrap_or_else(|| Monomial::one(self.nvars()));
        it.fold(first, |acc, m| acc.common_part(m))
    }
}

/// Monic greatest common divisor over Q, via content / primitive-part recursion on the
/// highest-index variable. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.check_vars(b);
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.vars.clone());
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        let m = a.monomial_content().common_part(&b.monomial_content());
        return Polynomial::from_terms(a.vars.clone(), [(m, Rational::one())]);
    }
    if a == b {
        return a.monic();
    }
    let x = a.top_var().max(b.top_var()).expect("non-constant");
    if !a.contains_var(x) {
        return gcd(a, &b.content_in(x));
    }
    if !b.contains_var(x) {
        return gcd(&a.content_in(x), b);
    }
    let ca = a.content_in(x);
    let cb = b.content_in(x);
    let content = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(x) < q.degree_in(x) {
        std::mem::swap(&mut p, &mut q);
    }
    if p.exact_div(&q).is_some() {
        return content.mul(&q).monic();
    }
    if let Some(g) = heuristic_gcd(&p, &q, x) {
        return content.mul(&g).monic();
    }
    loop {
        let r = p.pseudo_rem(&q, x);
        if r.is_zero() {
            break;
        }
        if !r.contains_var(x) {
            q = Polynomial::one(a.vars.clone());
            break;
        }
        p = q;
        q = r.primitive_part(x);
    }
    content.mul(&q.primitive_part(x)).monic()
}

/// Integer multiple of `p` with coprime integer coefficients.
fn integer_primitive(p: &Polynomial) -> Polynomial {
    let den = p
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = p.terms.values().fold(BigInt::zero(), |acc, c| {
        acc.gcd(&(c.numer() * &den / c.denom()))
    });
    p.scale(&Rational::new(den, num))
}

fn max_abs_coefficient(p: &Polynomial) -> BigInt {
    p.terms
        .values()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_default()
}

/// Heuristic gcd: evaluate `x` at a large integer, take the exact gcd of the images and read
/// it back in base `xi`. With `xi` above twice the smaller coefficient bound, a reconstruction
/// that divides both inputs is their gcd. `None` when every attempt fails that test.
fn heuristic_gcd(p: &Polynomial, q: &Polynomial, x: usize) -> Option<Polynomial> {
    let (p, q) = (integer_primitive(p), integer_primitive(q));
    let bound = max_abs_coefficient(&p).min(max_abs_coefficient(&q));
    let mut xi: BigInt = bound * 2 + 29;
    for _ in 0..4 {
        let at = Rational::from_integer(xi.clone());
        let (a, b) = (p.substitute(x, &at), q.substitute(x, &at));
        let cont = a
            .terms
            .values()
            .chain(b.terms.values())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let g = integer_primitive(&gcd(&a, &b)).scale(&Rational::from_integer(cont));
        let mut out = Polynomial::zero(p.vars.clone());
        for (m, c) in &g.terms {
            let mut c = c.numer().clone();
            let mut e = 0u32;
            while !c.is_zero() {
                let mut r = c.mod_floor(&xi);
                if &r * 2 > xi {
                    r -= &xi;
                }
                let mut exps = m.0.clone();
                exps[x] = e;
                out.add_term(Monomial(exps), Rational::from_integer(r.clone()));
                c = (c - r) / &xi;
                e += 1;
            }
        }
        if !out.is_zero() && p.exact_div(&out).is_some() && q.exact_div(&out).is_some() {
            return Some(out.monic());
        }
        xi = xi * 73794 / 27011;
    }
    None
}

pub(crate) fn fmt_rational(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(vars: &[String], m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (name, &e) in vars.iter().zip(m.0.iter()) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl Polynomial {
    /// Number of variable factors in the single term, if the polynomial is a monic monomial.
    pub(crate) fn single_factor(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| c.is_one() && m.0.iter().filter(|&&e| e > 0).count() == 1)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (pos, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if pos == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                fmt_rational(&abs, f)?;
                continue;
            }
            // unary minus binds tighter than '^' in the grammar, so "-A^2" would read as (-A)^2
            let first_power = m.0.iter().find(|&&e| e > 0).is_some_and(|&e| e > 1);
            if !abs.is_one() || (pos == 0 && negative && first_power) {
                fmt_rational(&abs, f)?;
                f.write_str("*")?;
            }
            fmt_monomial(&self.vars, m, f)?;
        }
        Ok(())
    }
}
