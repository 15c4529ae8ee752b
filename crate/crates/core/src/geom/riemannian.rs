//! Levi-Civita connection quantities of a [`Metric`].

use num_rational::BigRational;

use super::{Christoffel, GeomError, Metric, Tensor03, Tensor04, Tensor11, Tensor13, VectorField};
use crate::expr::sum;

/// `Γ^i_{jk} = ½ g^{ia}(∂_j g_{ak} + ∂_k g_{aj} − ∂_a g_{jk})`.
pub fn christoffel(g: &Metric) -> Christoffel {
    let c = g.chart();
    let n = c.dim();
    let half = BigRational::new(1.into(), 2.into());
    // first kind: Γ_{a,jk}
    let mut first = vec![c.zero(); n * n * n];
    for a in 0..n {
        for j in 0..n {
            for k in j..n {
                let v = (g.lower(a, k).derivative(j) + g.lower(a, j).derivative(k)
                    - g.lower(j, k).derivative(a))
                .scale(&half);
                first[(a * n + k) * n + j] = v.clone();
                first[(a * n + j) * n + k] = v;
            }
        }
    }
    Christoffel::from_fn(c, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        sum(
            c.coords(),
            (0..n).map(|a| g.upper(i, a) * &first[(a * n + j) * n + k]),
        )
    })
}

/// `R^i_{jkl} = ∂_kΓ^i_{lj} − ∂_lΓ^i_{kj} + Γ^i_{ka}Γ^a_{lj} − Γ^i_{la}Γ^a_{kj}`.
pub fn riemann(g: &Metric) -> Tensor13 {
    let c = g.chart();
    let n = c.dim();
    let gamma = christoffel(g);
    if gamma.is_zero() {
        return Tensor13::zero(c);
    }
    let mut data = vec![c.zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in (k + 1)..n {
                    let quad = sum(
                        c.coords(),
                        (0..n).map(|a| {
                            &gamma[[i, k, a]] * &gamma[[a, l, j]]
                                - &gamma[[i, l, a]] * &gamma[[a, k, j]]
                        }),
                    );
                    let v = gamma[[i, l, j]].derivative(k) - gamma[[i, k, j]].derivative(l) + quad;
                    data[((i * n + j) * n + l) * n + k] = -&v;
                    data[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    Tensor13::from_data(c, data)
}

/// `(∇e)^i_j = ∂_j e^i + Γ^i_{ja} e^a`.
pub fn covariant_derivative_vector(g: &Metric, e: &VectorField) -> Result<Tensor11, GeomError> {
    g.chart().same(e.chart())?;
    let c = g.chart();
    let gamma = christoffel(g);
    Ok(Tensor11::from_fn(c, |ix| {
        let (i, j) = (ix[0], ix[1]);
        e[[i]].derivative(j)
            + sum(
                c.coords(),
                (0..c.dim()).map(|a| &gamma[[i, j, a]] * &e[[a]]),
            )
    }))
}

/// Residual `∇_a c_{bcd} − ∇_b c_{acd}` for a totally symmetric `c`.
pub fn nabla_c_symmetry_residual(g: &Metric, c: &Tensor03) -> Result<Tensor04, GeomError> {
    g.chart().same(c.chart())?;
    if let Some(indices) = c.total_symmetry_defect() {
        return Err(GeomError::NotSymmetric {
            what: "(0,3) tensor c",
            indices,
        });
    }
    Ok(nabla_c_residual(g, c))
}

/// Same residual without the symmetry precondition.
pub(crate) fn nabla_c_residual(g: &Metric, ct: &Tensor03) -> Tensor04 {
    let ch = g.chart();
    let n = ch.dim();
    let gamma = christoffel(g);
    // ∇_a c_{bcd} = ∂_a c_{bcd} − Γ^e_{ab}c_{ecd} − Γ^e_{ac}c_{bed} − Γ^e_{ad}c_{bce}
    let mut nabla = vec![ch.zero(); n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let conn = sum(
                        ch.coords(),
                        (0..n).map(|e| {
                            &gamma[[e, a, b]] * &ct[[e, c, d]]
                                + &gamma[[e, a, c]] * &ct[[b, e, d]]
                                + &gamma[[e, a, d]] * &ct[[b, c, e]]
                        }),
                    );
                    nabla[((a * n + b) * n + c) * n + d] = ct[[b, c, d]].derivative(a) - conn;
                }
            }
        }
    }
    Tensor04::from_fn(ch, |ix| {
        let (a, b, c, d) = (ix[0], ix[1], ix[2], ix[3]);
        &nabla[((a * n + b) * n + c) * n + d] - &nabla[((b * n + a) * n + c) * n + d]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Chart;

    fn polar_like() -> (Chart, Metric) {
        let c = Chart::new(&["A", "B"]).unwrap();
        let a = c.coord(0);
        let g = Metric::new(&c, vec![vec![c.one(), c.zero()], vec![c.zero(), &a * &a]]).unwrap();
        (c, g)
    }

    #[test]
    fn christoffel_of_polar_metric() {
        let (c, g) = polar_like();
        let gamma = christoffel(&g);
        let inv_a = c.parse("1/A").unwrap();
        assert_eq!(gamma[[1, 0, 1]], inv_a);
        assert_eq!(gamma[[1, 1, 0]], inv_a);
        assert_eq!(gamma[[0, 1, 1]], c.parse("-A").unwrap());
        assert!(gamma[[0, 0, 0]].is_zero());
        assert!(gamma[[0, 0, 1]].is_zero());
        assert!(gamma[[1, 0, 0]].is_zero());
        assert!(gamma[[1, 1, 1]].is_zero());
        assert!(riemann(&g).is_zero());
    }

    #[test]
    fn constant_metrics_are_flat() {
        let c = Chart::new(&["A", "B", "C"]).unwrap();
        let g = Metric::new(
            &c,
            vec![
                vec![c.int(1), c.zero(), c.zero()],
                vec![c.zero(), c.int(-1), c.zero()],
                vec![c.zero(), c.zero(), c.int(1)],
            ],
        )
        .unwrap();
        assert!(christoffel(&g).is_zero());
        assert!(riemann(&g).is_zero());
    }

    #[test]
    fn covariant_derivative_of_angular_field() {
        let (c, g) = polar_like();
        let e = VectorField::coordinate(&c, 1);
        let d = covariant_derivative_vector(&g, &e).unwrap();
        assert_eq!(d[[1, 0]], c.parse("1/A").unwrap());
        assert_eq!(d[[0, 1]], c.parse("-A").unwrap());
        assert!(d[[0, 0]].is_zero());
        assert!(d[[1, 1]].is_zero());
        assert!(covariant_derivative_vector(&g, &VectorField::zero(&c))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn nabla_c_residual_cases() {
        let c = Chart::new(&["A", "B"]).unwrap();
        let g = Metric::new(&c, vec![vec![c.one(), c.zero()], vec![c.zero(), c.one()]]).unwrap();
        let mut comps = vec![c.zero(); 8];
        comps[0] = c.coord(1);
        let ct = Tensor03::new(&c, comps).unwrap();
        let r = nabla_c_symmetry_residual(&g, &ct).unwrap();
        assert_eq!(r[[1, 0, 0, 0]], c.int(1));
        assert_eq!(r[[0, 1, 0, 0]], c.int(-1));

        // third derivatives of a potential give a closed c
        let f = c.parse("A^4*B - 3*A*B^3 + B^5/7").unwrap();
        let third = Tensor03::from_fn(&c, |ix| {
            f.derivative(ix[0]).derivative(ix[1]).derivative(ix[2])
        });
        assert!(nabla_c_symmetry_residual(&g, &third).unwrap().is_zero());

        let mut bad = vec![c.zero(); 8];
        bad[1] = c.one();
        let bad = Tensor03::new(&c, bad).unwrap();
        assert!(matches!(
            nabla_c_symmetry_residual(&g, &bad),
            Err(GeomError::NotSymmetric { .. })
        ));
    }
}
