use super::{matrix, Bivector, GeomError, Tensor11, Tensor30};
use crate::expr::sum;

fn cyclic<F>(p: &Bivector, mut term: F) -> Tensor30
where
    F: FnMut(usize, usize, usize) -> crate::expr::RationalExpr,
{
    let c = p.chart();
    Tensor30::from_fn(c, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        term(i, j, k) + term(j, k, i) + term(k, i, j)
    })
}

/// `J^{ijk} = P^{ia}∂_aP^{jk} + P^{ja}∂_aP^{ki} + P^{ka}∂_aP^{ij}`; zero iff `P` is Poisson.
pub fn jacobi_residual(p: &Bivector) -> Tensor30 {
    let c = p.chart();
    let n = c.dim();
    cyclic(p, |i, j, k| {
        sum(
            c.coords(),
            (0..n).map(|a| &p[[i, a]] * p[[j, k]].derivative(a)),
        )
    })
}

/// Coefficient of `λ` in `jacobi_residual(P1 + λP2)`.
pub fn poisson_compatibility_residual(p1: &Bivector, p2: &Bivector) -> Result<Tensor30, GeomError> {
    p1.chart().same(p2.chart())?;
    let c = p1.chart();
    let n = c.dim();
    Ok(cyclic(p1, |i, j, k| {
        sum(
            c.coords(),
            (0..n).map(|a| {
                &p1[[i, a]] * p2[[j, k]].derivative(a) + &p2[[i, a]] * p1[[j, k]].derivative(a)
            }),
        )
    }))
}

/// Recursion operator `K = P2 · P1⁻¹`.
pub fn recursion_from_poisson(p1: &Bivector, p2: &Bivector) -> Result<Tensor11, GeomError> {
    p1.chart().same(p2.chart())?;
    let c = p1.chart();
    let inv = matrix::inverse(&p1.rows(), c.coords()).ok_or(GeomError::Singular("P1"))?;
    let p2 = Tensor11::new(c, p2.rows())?;
    let inv = Tensor11::new(c, inv)?;
    p2.matmul(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Chart;

    #[test]
    fn recursion_examples() {
        let c = Chart::new(&["A", "B"]).unwrap();
        let p1 =
            Bivector::new(&c, vec![vec![c.zero(), c.one()], vec![c.int(-1), c.zero()]]).unwrap();
        let a = c.coord(0);
        let p2 = Bivector::new(&c, vec![vec![c.zero(), a.clone()], vec![-&a, c.zero()]]).unwrap();
        let k = recursion_from_poisson(&p1, &p2).unwrap();
        assert_eq!(k, Tensor11::identity(&c).map(|e| e * &a));
        assert_eq!(
            recursion_from_poisson(&p1, &p1).unwrap(),
            Tensor11::identity(&c)
        );
        let p1x2 = Bivector::new(
            &c,
            vec![vec![c.zero(), c.int(2)], vec![c.int(-2), c.zero()]],
        )
        .unwrap();
        assert_eq!(
            recursion_from_poisson(&p1, &p1x2).unwrap(),
            Tensor11::identity(&c).map(|e| e * c.int(2))
        );
        let zero = Bivector::zero(&c);
        assert_eq!(
            recursion_from_poisson(&zero, &p1),
            Err(GeomError::Singular("P1"))
        );
    }

    #[test]
    fn jacobi_brute_force() {
        let c = Chart::new(&["A", "B", "C"]).unwrap();
        let (a, b) = (c.coord(0), c.coord(1));
        let z = c.zero();
        let p = Bivector::new(
            &c,
            vec![
                vec![z.clone(), a.clone(), z.clone()],
                vec![-&a, z.clone(), b.clone()],
                vec![z.clone(), -&b, z.clone()],
            ],
        )
        .unwrap();
        let j = jacobi_residual(&p);
        // P^{1a}∂_aP^{23} + P^{2a}∂_aP^{31} + P^{3a}∂_aP^{12} = A·1 + 0 + 0
        assert_eq!(j[[0, 1, 2]], a);
        assert_eq!(j[[1, 0, 2]], -&a);

        let pc = Bivector::new(
            &c,
            vec![
                vec![z.clone(), c.coord(2), z.clone()],
                vec![-c.coord(2), z.clone(), z.clone()],
                vec![z.clone(), z.clone(), z.clone()],
            ],
        )
        .unwrap();
        assert!(jacobi_residual(&pc)[[0, 1, 2]].is_zero());
    }
}
