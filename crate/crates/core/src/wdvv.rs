//! Three-dimensional WDVV pipeline: prepotential, the `(P, Q, R)` triple, the commuting
//! recursion pair and the induced H₂ data, plus a power-series solver in `A`.
//!
//! Coordinates are `(A, B, C)` in that order; only their positions matter.

use num_traits::Zero;
use thiserror::Error;

use crate::expr::{ExprError, Rational, RationalExpr};
use crate::geom::{Chart, GeomError, OneForm, Tensor11, VectorField};
use crate::hverify::{ManifoldSpec, VerifyError};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WdvvError {
    #[error("the WDVV pipeline needs a 3-dimensional chart, got {0}")]
    Dimension(usize),
    #[error("potential depends on the last coordinate {0}")]
    DependsOnLast(String),
    #[error("{0} must be a polynomial")]
    NotPolynomial(&'static str),
    #[error("initial data must not depend on the first coordinate {0}")]
    InitialDependsOnFirst(String),
    #[error("series order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

fn require_3d(chart: &Chart) -> Result<(), WdvvError> {
    if chart.dim() != 3 {
        return Err(WdvvError::Dimension(chart.dim()));
    }
    Ok(())
}

/// A polynomial potential `F(A, B)` on a chart `(A, B, C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prepotential {
    chart: Chart,
    f: RationalExpr,
}

impl Prepotential {
    pub fn new(chart: &Chart, f: RationalExpr) -> Result<Self, WdvvError> {
        require_3d(chart)?;
        let f = chart.adopt(f)?;
        if !f.is_polynomial() {
            return Err(WdvvError::NotPolynomial("potential"));
        }
        if f.depends_on(C) {
            return Err(WdvvError::DependsOnLast(chart.coords()[C].clone()));
        }
        Ok(Prepotential {
            chart: chart.clone(),
            f,
        })
    }

    /// Parses `source` on the default chart `(A, B, C)`.
    pub fn parse(source: &str) -> Result<Self, WdvvError> {
        let chart = default_chart();
        let f = chart.parse(source)?;
        Prepotential::new(&chart, f)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn f(&self) -> &RationalExpr {
        &self.f
    }

    fn d(&self, idx: &[usize]) -> RationalExpr {
        idx.iter().fold(self.f.clone(), |e, &i| e.derivative(i))
    }
}

pub fn default_chart() -> Chart {
    Chart::new(&["A", "B", "C"]).expect("valid names")
}

/// `F_AAA + F_AAB·F_BBB − F_ABB²`.
pub fn wdvv_residual(f: &Prepotential) -> RationalExpr {
    let f_abb = f.d(&[A, B, B]);
    f.d(&[A, A, A]) + f.d(&[A, A, B]) * f.d(&[B, B, B]) - &f_abb * &f_abb
}

/// `P = λC + φ`, `Q = µC + ψ`, `R = νC + χ` on a chart `(A, B, C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQRTriple {
    chart: Chart,
    pub p: RationalExpr,
    pub q: RationalExpr,
    pub r: RationalExpr,
    /// Separation constants; all zero when the triple was not built by [`PQRTriple::separated`].
    pub lambda: Rational,
    pub mu: Rational,
    pub nu: Rational,
}

impl PQRTriple {
    pub fn new(
        chart: &Chart,
        p: RationalExpr,
        q: RationalExpr,
        r: RationalExpr,
    ) -> Result<Self, WdvvError> {
        require_3d(chart)?;
        Ok(PQRTriple {
            chart: chart.clone(),
            p: chart.adopt(p)?,
            q: chart.adopt(q)?,
            r: chart.adopt(r)?,
            lambda: Rational::zero(),
            mu: Rational::zero(),
            nu: Rational::zero(),
        })
    }

    /// Builds `(λC + φ, µC + ψ, νC + χ)` from `φ, ψ, χ` independent of `C`.
    pub fn separated(
        chart: &Chart,
        (lambda, mu, nu): (Rational, Rational, Rational),
        phi: RationalExpr,
        psi: RationalExpr,
        chi: RationalExpr,
    ) -> Result<Self, WdvvError> {
        require_3d(chart)?;
        let cc = chart.coord(C);
        let mut parts = Vec::with_capacity(3);
        for (k, e) in [(&lambda, phi), (&mu, psi), (&nu, chi)] {
            let e = chart.adopt(e)?;
            if e.depends_on(C) {
                return Err(WdvvError::DependsOnLast(chart.coords()[C].clone()));
            }
            parts.push(cc.scale(k) + e);
        }
        let r = parts.pop().unwrap();
        let q = parts.pop().unwrap();
        let p = parts.pop().unwrap();
        Ok(PQRTriple {
            chart: chart.clone(),
            p,
            q,
            r,
            lambda,
            mu,
            nu,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }
}

/// Right-hand sides of the evolution system for `(P_A, Q_A, R_A)`.
fn pqr_rhs(p: &RationalExpr, q: &RationalExpr, r: &RationalExpr) -> [RationalExpr; 3] {
    let (p_b, p_c) = (p.derivative(B), p.derivative(C));
    let (q_b, q_c) = (q.derivative(B), q.derivative(C));
    let (r_b, r_c) = (r.derivative(B), r.derivative(C));
    let qb_rc = &q_b - &r_c;
    let qc_pb = &q_c - &p_b;
    [
        &p_c * &qb_rc + &q_c * &qc_pb,
        &p_c * &r_b - &q_c * &q_b,
        &q_b * &qb_rc + &r_b * &qc_pb,
    ]
}

/// Residuals of the commutativity system, each as right side minus `A`-derivative.
///
/// With this sign, a triple built from a potential yields `(0, 0, −wdvv_residual)`.
pub fn pqr_residuals(t: &PQRTriple) -> [RationalExpr; 3] {
    let [rp, rq, rr] = pqr_rhs(&t.p, &t.q, &t.r);
    [
        rp - t.p.derivative(A),
        rq - t.q.derivative(A),
        rr - t.r.derivative(A),
    ]
}

/// `P = C + F_BB`, `Q = F_AB`, `R = F_AA`.
pub fn pqr_from_prepotential(f: &Prepotential) -> PQRTriple {
    let one = Rational::from_integer(1.into());
    PQRTriple::separated(
        f.chart(),
        (one, Rational::zero(), Rational::zero()),
        f.d(&[B, B]),
        f.d(&[A, B]),
        f.d(&[A, A]),
    )
    .expect("potential is independent of C")
}

fn gradient_row(e: &RationalExpr) -> Vec<RationalExpr> {
    (0..3).map(|i| e.derivative(i)).collect()
}

/// `K₁` with rows `(0,1,0), ∇P, ∇Q` and `K₂` with rows `(0,0,1), ∇Q, ∇R`.
pub fn recursion_pair_from_pqr(t: &PQRTriple) -> (Tensor11, Tensor11) {
    let c = t.chart();
    let unit = |j: usize| (0..3).map(|i| c.kronecker(i, j)).collect::<Vec<_>>();
    let k1 = Tensor11::new(c, vec![unit(B), gradient_row(&t.p), gradient_row(&t.q)])
        .expect("3x3 on the triple's chart");
    let k2 = Tensor11::new(c, vec![unit(C), gradient_row(&t.q), gradient_row(&t.r)])
        .expect("3x3 on the triple's chart");
    (k1, k2)
}

/// H₂ data with `X = ∂_C`, `θ = dA` and the recursion pair of the potential.
pub fn h2_spec_from_prepotential(f: &Prepotential) -> Result<ManifoldSpec, WdvvError> {
    let c = f.chart();
    let (k1, k2) = recursion_pair_from_pqr(&pqr_from_prepotential(f));
    let spec = ManifoldSpec::new(
        VectorField::coordinate(c, C),
        OneForm::coordinate(c, A),
        vec![k1, k2],
    )?
    .with_potential(f.f().clone())?;
    Ok(spec)
}

/// Coefficients of `A^0 … A^{len-1}` of a polynomial expression, each free of `A`.
pub fn taylor_in_first(e: &RationalExpr, len: usize) -> Result<Vec<RationalExpr>, WdvvError> {
    if !e.is_polynomial() {
        return Err(WdvvError::NotPolynomial("expanded expression"));
    }
    let mut coeffs: Vec<RationalExpr> = e
        .numerator()
        .coefficients_in(A)
        .into_iter()
        .map(RationalExpr::from_polynomial)
        .collect();
    coeffs.resize(len.max(coeffs.len()), RationalExpr::zero(e.vars().clone()));
    coeffs.truncate(len);
    Ok(coeffs)
}

/// Truncated solution `P ≈ Σ_{k<N} p_k A^k` (likewise `Q`, `R`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSolution {
    chart: Chart,
    pub order: usize,
    /// `coefficients[0]` holds `p_k`, `[1]` holds `q_k`, `[2]` holds `r_k`.
    pub coefficients: [Vec<RationalExpr>; 3],
}

impl SeriesSolution {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Sum of the stored terms of component `which` (0 = P, 1 = Q, 2 = R).
    pub fn truncation(&self, which: usize) -> RationalExpr {
        polynomial_in_a(&self.chart, &self.coefficients[which])
    }

    /// Residuals of the system evaluated on the truncations.
    pub fn residuals(&self) -> [RationalExpr; 3] {
        let t = PQRTriple::new(
            &self.chart,
            self.truncation(0),
            self.truncation(1),
            self.truncation(2),
        )
        .expect("3-dimensional chart");
        pqr_residuals(&t)
    }

    /// Largest `d` such that every residual has zero `A^0 … A^d` coefficients.
    pub fn residual_vanishes_through(&self) -> Option<usize> {
        let res = self.residuals();
        let mut first_bad = usize::MAX;
        for r in &res {
            let coeffs = r.numerator().coefficients_in(A);
            if let Some(d) = coeffs.iter().position(|c| !c.is_zero()) {
                first_bad = first_bad.min(d);
            }
        }
        match first_bad {
            0 => None,
            usize::MAX => Some(usize::MAX),
            d => Some(d - 1),
        }
    }
}

fn polynomial_in_a(chart: &Chart, coeffs: &[RationalExpr]) -> RationalExpr {
    let a = chart.coord(A);
    coeffs
        .iter()
        .rev()
        .fold(chart.zero(), |acc, c| acc * &a + c)
}

/// Solves the system as an evolution in `A` from data at `A = 0`:
/// `p_{k+1} = [A^k] RHS_P(order-k truncation) / (k + 1)` and likewise for `q`, `r`.
pub fn series_solve_pqr(
    chart: &Chart,
    init: [RationalExpr; 3],
    order: usize,
) -> Result<SeriesSolution, WdvvError> {
    require_3d(chart)?;
    if order == 0 {
        return Err(WdvvError::ZeroOrder);
    }
    let mut coefficients: [Vec<RationalExpr>; 3] = Default::default();
    for (slot, e) in coefficients.iter_mut().zip(init) {
        let e = chart.adopt(e)?;
        if !e.is_polynomial() {
            return Err(WdvvError::NotPolynomial("initial data"));
        }
        if e.depends_on(A) {
            return Err(WdvvError::InitialDependsOnFirst(chart.coords()[A].clone()));
        }
        slot.push(e);
    }
    for k in 0..order - 1 {
        let [p, q, r] = [0, 1, 2].map(|w| polynomial_in_a(chart, &coefficients[w]));
        let rhs = pqr_rhs(&p, &q, &r);
        let inv = Rational::new(1.into(), ((k + 1) as i64).into());
        for (slot, e) in coefficients.iter_mut().zip(rhs) {
            let next = taylor_in_first(&e, k + 1)?.pop().expect("k + 1 entries");
            slot.push(next.scale(&inv));
        }
    }
    Ok(SeriesSolution {
        chart: chart.clone(),
        order,
        coefficients,
    })
}

/// Data of a triple on the slice `A = 0`.
pub fn initial_slice(t: &PQRTriple) -> Result<[RationalExpr; 3], WdvvError> {
    let zero = Rational::zero();
    Ok([
        t.p.substitute(A, &zero)?,
        t.q.substitute(A, &zero)?,
        t.r.substitute(A, &zero)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hverify::check_hm;

    fn pot(s: &str) -> Prepotential {
        Prepotential::parse(s).unwrap()
    }

    fn e(s: &str) -> RationalExpr {
        default_chart().parse(s).unwrap()
    }

    #[test]
    fn residual_examples() {
        assert!(wdvv_residual(&pot("B^3/6")).is_zero());
        assert!(wdvv_residual(&pot("A^2*B/2")).is_zero());
        assert!(wdvv_residual(&pot("0")).is_zero());
        assert!(wdvv_residual(&pot("A^3/6")).is_one());
        assert_eq!(wdvv_residual(&pot("A*B^2")), e("-4"));
    }

    #[test]
    fn potential_validation() {
        assert!(matches!(
            Prepotential::parse("A*C"),
            Err(WdvvError::DependsOnLast(_))
        ));
        assert!(matches!(
            Prepotential::parse("1/A"),
            Err(WdvvError::NotPolynomial(_))
        ));
        let c2 = Chart::new(&["A", "B"]).unwrap();
        assert_eq!(
            Prepotential::new(&c2, c2.coord(0)),
            Err(WdvvError::Dimension(2))
        );
    }

    #[test]
    fn triples_from_potentials() {
        let t = pqr_from_prepotential(&pot("A^2*B/2"));
        assert_eq!((&t.p, &t.q, &t.r), (&e("C"), &e("A"), &e("B")));
        let t = pqr_from_prepotential(&pot("B^3/6"));
        assert_eq!((&t.p, &t.q, &t.r), (&e("C + B"), &e("0"), &e("0")));
        let t = pqr_from_prepotential(&pot("0"));
        assert_eq!((&t.p, &t.q, &t.r), (&e("C"), &e("0"), &e("0")));
        assert!(t.lambda == Rational::from_integer(1.into()) && t.mu.is_zero() && t.nu.is_zero());
    }

    #[test]
    fn residuals_of_explicit_triples() {
        let ch = default_chart();
        let t = PQRTriple::new(&ch, e("C"), e("A"), e("B")).unwrap();
        assert!(pqr_residuals(&t).iter().all(RationalExpr::is_zero));
        let t = PQRTriple::new(&ch, ch.zero(), ch.zero(), ch.zero()).unwrap();
        assert!(pqr_residuals(&t).iter().all(RationalExpr::is_zero));
        // right side 0, A-derivative 1
        let t = PQRTriple::new(&ch, e("A"), ch.zero(), ch.zero()).unwrap();
        let r = pqr_residuals(&t);
        assert_eq!(r[0], e("-1"));
        assert!(r[1].is_zero() && r[2].is_zero());
    }

    #[test]
    fn recursion_pairs() {
        let ch = default_chart();
        let rows = |k: &Tensor11| -> Vec<Vec<i64>> {
            k.rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.constant_value().unwrap().to_integer().try_into().unwrap())
                        .collect()
                })
                .collect()
        };
        let (k1, k2) =
            recursion_pair_from_pqr(&PQRTriple::new(&ch, e("C"), e("A"), e("B")).unwrap());
        assert_eq!(rows(&k1), vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        assert_eq!(k2, k1.pow(2));
        let (k1, k2) = recursion_pair_from_pqr(&pqr_from_prepotential(&pot("B^3/6")));
        assert_eq!(rows(&k1), vec![vec![0, 1, 0], vec![0, 1, 1], vec![0, 0, 0]]);
        assert_eq!(rows(&k2), vec![vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0]]);
        let z = ch.zero();
        let (k1, _) =
            recursion_pair_from_pqr(&PQRTriple::new(&ch, z.clone(), z.clone(), z).unwrap());
        assert_eq!(rows(&k1), vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]);
    }

    #[test]
    fn pipeline_verdicts() {
        for (f, ok) in [("A^2*B/2", true), ("B^3/6", true), ("A^3/6", false)] {
            let spec = h2_spec_from_prepotential(&pot(f)).unwrap();
            assert_eq!(check_hm(&spec, 2).unwrap().passed(), ok, "{f}");
        }
    }

    #[test]
    fn series_regenerates_closed_form() {
        let ch = default_chart();
        let t = pqr_from_prepotential(&pot("A^2*B/2"));
        let init = initial_slice(&t).unwrap();
        assert_eq!(init, [e("C"), e("0"), e("B")]);
        let s = series_solve_pqr(&ch, init.clone(), 6).unwrap();
        assert_eq!(s.truncation(0), e("C"));
        assert_eq!(s.truncation(1), e("A"));
        assert_eq!(s.truncation(2), e("B"));
        assert_eq!(s.coefficients[1][1], e("1"));
        assert_eq!(s.residual_vanishes_through(), Some(usize::MAX));

        let one = series_solve_pqr(&ch, init.clone(), 1).unwrap();
        assert_eq!(one.coefficients, init.clone().map(|x| vec![x]));
        let z = series_solve_pqr(&ch, [ch.zero(), ch.zero(), ch.zero()], 4).unwrap();
        assert!(z.coefficients.iter().flatten().all(RationalExpr::is_zero));
        assert_eq!(series_solve_pqr(&ch, init, 0), Err(WdvvError::ZeroOrder));
    }

    #[test]
    fn series_truncation_order() {
        // nonlinear data: the top coefficient is unconstrained, lower ones vanish
        let ch = default_chart();
        let s = series_solve_pqr(&ch, [e("C + B^2"), e("B*C"), e("C^2")], 4).unwrap();
        assert!(s.residual_vanishes_through().unwrap() >= 2);
        let t = taylor_in_first(&e("1 + 2*A + A^3*B"), 5).unwrap();
        assert_eq!(t, vec![e("1"), e("2"), e("0"), e("B"), e("0")]);
    }
}
