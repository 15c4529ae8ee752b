use super::{
    Chart, GeomError, OneForm, Tensor11, Tensor12, TwoForm, VectorField, VectorValuedTwoForm,
};
use crate::expr::{sum, RationalExpr};

fn sum_over<F>(chart: &Chart, f: F) -> RationalExpr
where
    F: FnMut(usize) -> RationalExpr,
{
    sum(chart.coords(), (0..chart.dim()).map(f))
}

/// `d[a][flat] = ∂_a` of every component.
fn gradients(chart: &Chart, comps: &[RationalExpr]) -> Vec<Vec<RationalExpr>> {
    (0..chart.dim())
        .map(|a| comps.iter().map(|e| e.derivative(a)).collect())
        .collect()
}

/// `[X, Y]^i = X^a ∂_a Y^i − Y^a ∂_a X^i`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, GeomError> {
    x.chart().same(y.chart())?;
    let c = x.chart();
    Ok(VectorField::from_fn(c, |ix| {
        let i = ix[0];
        sum_over(c, |a| {
            &x[[a]] * y[[i]].derivative(a) - &y[[a]] * x[[i]].derivative(a)
        })
    }))
}

/// Nijenhuis torsion
/// `N^i_{jk} = K^a_j ∂_a K^i_k − K^a_k ∂_a K^i_j − K^i_a (∂_j K^a_k − ∂_k K^a_j)`.
pub fn nijenhuis_torsion(k: &Tensor11) -> VectorValuedTwoForm {
    let c = k.chart();
    let n = c.dim();
    let dk = gradients(c, k.components());
    let d = |a: usize, i: usize, j: usize| &dk[a][i * n + j];
    let mut data = vec![c.zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for kk in (j + 1)..n {
                let v = sum_over(c, |a| {
                    &k[[a, j]] * d(a, i, kk)
                        - &k[[a, kk]] * d(a, i, j)
                        - &k[[i, a]] * (d(j, a, kk) - d(kk, a, j))
                });
                data[(i * n + kk) * n + j] = -&v;
                data[(i * n + j) * n + kk] = v;
            }
        }
    }
    VectorValuedTwoForm::from_data(c, data)
}

/// Haantjes tensor built from the torsion:
/// `H^i_{jk} = N^i_{ab}K^a_jK^b_k − K^i_b N^b_{ak}K^a_j − K^i_b N^b_{ja}K^a_k + K^i_a K^a_b N^b_{jk}`.
pub fn haantjes_tensor(k: &Tensor11) -> VectorValuedTwoForm {
    let c = k.chart();
    let n = c.dim();
    let nt = nijenhuis_torsion(k);
    if nt.is_zero() {
        return nt;
    }
    let k2 = k.pow(2);
    // t[i][j][b] = N^i_{ab} K^a_j
    let t = VectorValuedTwoForm::from_fn(c, |ix| {
        let (i, j, b) = (ix[0], ix[1], ix[2]);
        sum_over(c, |a| &nt[[i, a, b]] * &k[[a, j]])
    });
    VectorValuedTwoForm::from_fn(c, |ix| {
        let (i, j, kk) = (ix[0], ix[1], ix[2]);
        if j == kk {
            return c.zero();
        }
        let mut acc = c.zero();
        for b in 0..n {
            // N^i_{ab}K^a_j K^b_k
            acc = acc + &t[[i, j, b]] * &k[[b, kk]];
            // K^i_b N^b_{ak} K^a_j
            acc = acc - &k[[i, b]] * &t[[b, j, kk]];
            // K^i_b N^b_{ja} K^a_k = -K^i_b N^b_{aj} K^a_k
            acc = acc + &k[[i, b]] * &t[[b, kk, j]];
            acc = acc + &k2[[i, b]] * &nt[[b, j, kk]];
        }
        acc
    })
}

/// Lie derivative along a vector field.
pub trait LieDerivative: Sized {
    fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError>;
}

impl LieDerivative for VectorField {
    fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError> {
        lie_bracket(x, self)
    }
}

impl LieDerivative for OneForm {
    /// `(L_Xθ)_j = X^a ∂_a θ_j + θ_a ∂_j X^a`.
    fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError> {
        x.chart().same(self.chart())?;
        let c = self.chart();
        Ok(OneForm::from_fn(c, |ix| {
            let j = ix[0];
            sum_over(c, |a| {
                &x[[a]] * self[[j]].derivative(a) + &self[[a]] * x[[a]].derivative(j)
            })
        }))
    }
}

impl LieDerivative for Tensor11 {
    /// `(L_XK)^i_j = X^a ∂_a K^i_j − K^a_j ∂_a X^i + K^i_a ∂_j X^a`.
    fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError> {
        x.chart().same(self.chart())?;
        let c = self.chart();
        let dx = gradients(c, x.components());
        Ok(Tensor11::from_fn(c, |ix| {
            let (i, j) = (ix[0], ix[1]);
            sum_over(c, |a| {
                &x[[a]] * self[[i, j]].derivative(a) - &self[[a, j]] * &dx[a][i]
                    + &self[[i, a]] * &dx[j][a]
            })
        }))
    }
}

impl LieDerivative for Tensor12 {
    /// `(L_XC)^i_{jk} = X^a∂_aC^i_{jk} − C^a_{jk}∂_aX^i + C^i_{ak}∂_jX^a + C^i_{ja}∂_kX^a`.
    fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError> {
        x.chart().same(self.chart())?;
        let c = self.chart();
        let dx = gradients(c, x.components());
        Ok(Tensor12::from_fn(c, |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            sum_over(c, |a| {
                &x[[a]] * self[[i, j, k]].derivative(a) - &self[[a, j, k]] * &dx[a][i]
                    + &self[[i, a, k]] * &dx[j][a]
                    + &self[[i, j, a]] * &dx[k][a]
            })
        }))
    }
}

pub fn lie_derivative<T: LieDerivative>(x: &VectorField, t: &T) -> Result<T, GeomError> {
    t.lie_derivative(x)
}

/// `(dθ)_{jk} = ∂_j θ_k − ∂_k θ_j`.
pub fn exterior_derivative(theta: &OneForm) -> TwoForm {
    TwoForm::from_fn(theta.chart(), |ix| {
        let (j, k) = (ix[0], ix[1]);
        theta[[k]].derivative(j) - theta[[j]].derivative(k)
    })
}

/// Transpose action of a (1,1) tensor on a 1-form, `(Kθ)_j = K^i_j θ_i`.
pub fn coaction(k: &Tensor11, theta: &OneForm) -> Result<OneForm, GeomError> {
    k.chart().same(theta.chart())?;
    let c = k.chart();
    Ok(OneForm::from_fn(c, |ix| {
        sum_over(c, |i| &k[[i, ix[0]]] * &theta[[i]])
    }))
}

/// `K1·K2 − K2·K1`.
pub fn tensor11_commutator(k1: &Tensor11, k2: &Tensor11) -> Result<Tensor11, GeomError> {
    let a = k1.matmul(k2)?;
    let b = k2.matmul(k1)?;
    a.zip_with(&b, |x, y| x - y)
}

/// `(θ N)_{jk} = θ_i N^i_{jk}`.
pub fn contract_form_vv2form(
    theta: &OneForm,
    n: &VectorValuedTwoForm,
) -> Result<TwoForm, GeomError> {
    theta.chart().same(n.chart())?;
    let c = theta.chart();
    Ok(TwoForm::from_fn(c, |ix| {
        sum_over(c, |i| &theta[[i]] * &n[[i, ix[0], ix[1]]])
    }))
}

/// `(X∘Y)^i = C^i_{jk} X^j Y^k`.
pub fn mult_apply(
    c: &Tensor12,
    x: &VectorField,
    y: &VectorField,
) -> Result<VectorField, GeomError> {
    c.chart().same(x.chart())?;
    c.chart().same(y.chart())?;
    let ch = c.chart();
    let n = ch.dim();
    Ok(VectorField::from_fn(ch, |ix| {
        let i = ix[0];
        sum(
            ch.coords(),
            (0..n)
                .flat_map(|j| (0..n).map(move |k| (j, k)))
                .filter_map(|(j, k)| {
                    if x[[j]].is_zero() || y[[k]].is_zero() {
                        None
                    } else {
                        Some(&c[[i, j, k]] * &x[[j]] * &y[[k]])
                    }
                }),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart2() -> Chart {
        Chart::new(&["A", "B"]).unwrap()
    }

    fn diag_ba(c: &Chart) -> Tensor11 {
        Tensor11::new(
            c,
            vec![vec![c.coord(1), c.zero()], vec![c.zero(), c.coord(0)]],
        )
        .unwrap()
    }

    #[test]
    fn bracket_examples() {
        let c = chart2();
        let da = VectorField::coordinate(&c, 0);
        let db = VectorField::coordinate(&c, 1);
        assert!(lie_bracket(&da, &db).unwrap().is_zero());
        let a_db = db.scale(&c.coord(0));
        let br = lie_bracket(&a_db, &da).unwrap();
        assert_eq!(br, db.scale(&c.int(-1)));
        assert!(lie_bracket(&a_db, &a_db).unwrap().is_zero());
    }

    #[test]
    fn torsion_of_diag_b_a() {
        let c = chart2();
        let k = diag_ba(&c);
        let n = nijenhuis_torsion(&k);
        let b_minus_a = c.parse("B - A").unwrap();
        assert_eq!(n[[0, 0, 1]], b_minus_a);
        assert_eq!(n[[1, 0, 1]], b_minus_a);
        assert_eq!(n[[0, 1, 0]], -&b_minus_a);
        assert_eq!(n[[1, 1, 0]], -&b_minus_a);
        for i in 0..2 {
            for j in 0..2 {
                assert!(n[[i, j, j]].is_zero());
            }
        }
        assert!(haantjes_tensor(&k).is_zero());
    }

    #[test]
    fn torsion_vanishes_for_identity_and_constants() {
        let c = Chart::new(&["A", "B", "C"]).unwrap();
        assert!(nijenhuis_torsion(&Tensor11::identity(&c)).is_zero());
        assert!(haantjes_tensor(&Tensor11::identity(&c)).is_zero());
        let k = Tensor11::from_fn(&c, |ix| c.int((ix[0] * 3 + ix[1]) as i64 - 4));
        assert!(nijenhuis_torsion(&k).is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let c = chart2();
        let da = OneForm::coordinate(&c, 0);
        let x = VectorField::coordinate(&c, 0);
        assert!(lie_derivative(&x, &da).unwrap().is_zero());
        let ax = x.scale(&c.coord(0));
        assert_eq!(lie_derivative(&ax, &da).unwrap(), da);
    }

    #[test]
    fn exterior_derivative_examples() {
        let c = chart2();
        assert!(exterior_derivative(&OneForm::coordinate(&c, 0)).is_zero());
        let b_da = OneForm::new(&c, vec![c.coord(1), c.zero()]).unwrap();
        let d = exterior_derivative(&b_da);
        assert_eq!(d[[0, 1]], c.int(-1));
        assert_eq!(d[[1, 0]], c.int(1));
        let s = c.parse("A^3*B - B^2/A").unwrap();
        assert!(exterior_derivative(&OneForm::differential(&c, &s)).is_zero());
    }

    #[test]
    fn theta_annihilating_torsion() {
        let c = chart2();
        let n = nijenhuis_torsion(&diag_ba(&c));
        let r = contract_form_vv2form(&OneForm::coordinate(&c, 0), &n).unwrap();
        assert_eq!(r[[0, 1]], c.parse("B - A").unwrap());
        let zero = OneForm::zero(&c);
        assert!(contract_form_vv2form(&zero, &n).unwrap().is_zero());
    }

    #[test]
    fn commutator_basics() {
        let c = chart2();
        let k = diag_ba(&c);
        assert!(tensor11_commutator(&k, &k).unwrap().is_zero());
        assert!(tensor11_commutator(&k, &Tensor11::identity(&c))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let c = chart2();
        let d = Chart::new(&["X", "Y"]).unwrap();
        assert_eq!(
            lie_bracket(
                &VectorField::coordinate(&c, 0),
                &VectorField::coordinate(&d, 0)
            ),
            Err(GeomError::ChartMismatch)
        );
        assert_eq!(
            coaction(&Tensor11::identity(&c), &OneForm::coordinate(&d, 0)),
            Err(GeomError::ChartMismatch)
        );
    }
}
