//! Component containers. Every tensor stores its `n^rank` components in row-major order
//! and is indexed with `t[[i, j, ...]]`.

use std::ops::Index;

use super::{matrix, Chart, GeomError};
use crate::expr::RationalExpr;

fn flat_index(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| {
        assert!(i < n, "index {i} out of range for dimension {n}");
        acc * n + i
    })
}

fn unflatten(n: usize, rank: usize, mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

/// Anything whose vanishing is decided componentwise.
pub trait Residual {
    /// First nonzero component in lexicographic index order, if any.
    fn first_nonzero(&self) -> Option<(Vec<usize>, RationalExpr)>;
}

macro_rules! tensor_type {
    ($(#[$doc:meta])* $name:ident, $rank:expr) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq)]
        pub struct $name {
            chart: Chart,
            data: Vec<RationalExpr>,
        }

        impl $name {
            pub const RANK: usize = $rank;

            pub fn zero(chart: &Chart) -> Self {
                let len = chart.dim().pow(Self::RANK as u32);
                $name {
                    chart: chart.clone(),
                    data: vec![chart.zero(); len],
                }
            }

            /// Fills every component from its index tuple. The caller is responsible for any
            /// symmetry the type promises.
            #[allow(dead_code)]
            pub(crate) fn from_fn<F>(chart: &Chart, mut f: F) -> Self
            where
                F: FnMut(&[usize]) -> RationalExpr,
            {
                let n = chart.dim();
                let len = n.pow(Self::RANK as u32);
                let data = (0..len)
                    .map(|flat| f(&unflatten(n, Self::RANK, flat)))
                    .collect();
                $name {
                    chart: chart.clone(),
                    data,
                }
            }

            #[allow(dead_code)]
            pub(crate) fn from_data(chart: &Chart, data: Vec<RationalExpr>) -> Self {
                assert_eq!(data.len(), chart.dim().pow(Self::RANK as u32));
                $name {
                    chart: chart.clone(),
                    data,
                }
            }

            pub fn chart(&self) -> &Chart {
                &self.chart
            }

            pub fn dim(&self) -> usize {
                self.chart.dim()
            }

            /// Components in row-major (lexicographic index) order.
            pub fn components(&self) -> &[RationalExpr] {
                &self.data
            }

            pub fn get(&self, idx: &[usize]) -> &RationalExpr {
                assert_eq!(idx.len(), Self::RANK);
                &self.data[flat_index(self.chart.dim(), idx)]
            }

            pub fn is_zero(&self) -> bool {
                self.data.iter().all(RationalExpr::is_zero)
            }

            /// First nonzero component in lexicographic index order.
            pub fn first_nonzero(&self) -> Option<(Vec<usize>, RationalExpr)> {
                let n = self.chart.dim();
                self.data
                    .iter()
                    .position(|e| !e.is_zero())
                    .map(|flat| (unflatten(n, Self::RANK, flat), self.data[flat].clone()))
            }

            pub fn map<F: FnMut(&RationalExpr) -> RationalExpr>(&self, f: F) -> Self {
                $name {
                    chart: self.chart.clone(),
                    data: self.data.iter().map(f).collect(),
                }
            }

            /// Componentwise combination of two tensors on the same chart.
            pub fn zip_with<F>(&self, other: &Self, mut f: F) -> Result<Self, GeomError>
            where
                F: FnMut(&RationalExpr, &RationalExpr) -> RationalExpr,
            {
                self.chart.same(&other.chart)?;
                Ok($name {
                    chart: self.chart.clone(),
                    data: self
                        .data
                        .iter()
                        .zip(other.data.iter())
                        .map(|(a, b)| f(a, b))
                        .collect(),
                })
            }
        }

        impl Residual for $name {
            fn first_nonzero(&self) -> Option<(Vec<usize>, RationalExpr)> {
                $name::first_nonzero(self)
            }
        }

        impl Index<[usize; $rank]> for $name {
            type Output = RationalExpr;
            fn index(&self, idx: [usize; $rank]) -> &RationalExpr {
                &self.data[flat_index(self.chart.dim(), &idx)]
            }
        }
    };
}

tensor_type!(
    /// Vector field `X^i ∂_i`.
    VectorField, 1
);
tensor_type!(
    /// 1-form `θ_i dx^i`.
    OneForm, 1
);
tensor_type!(
    /// (1,1) tensor, entry `[i][j] = K^i_j`.
    Tensor11, 2
);
tensor_type!(
    /// Antisymmetric (0,2) tensor.
    TwoForm, 2
);
tensor_type!(
    /// Antisymmetric contravariant (2,0) tensor, entry `[i][j] = P^{ij}`.
    Bivector, 2
);
tensor_type!(
    /// Vector-valued 2-form, entry `[i][j][k]`, antisymmetric in `(j, k)`.
    VectorValuedTwoForm, 3
);
tensor_type!(
    /// (1,2) tensor, entry `[i][j][k] = C^i_{jk}`. Symmetry in the lower pair is a property
    /// checked by the F-manifold axioms, not enforced on construction.
    Tensor12, 3
);
tensor_type!(
    /// Christoffel symbols of the second kind, `[i][j][k] = Γ^i_{jk}`.
    Christoffel, 3
);
tensor_type!(
    /// Covariant 3-tensor, entry `[i][j][k] = c_{ijk}`.
    Tensor03, 3
);
tensor_type!(
    /// Contravariant 3-tensor, entry `[i][j][k] = J^{ijk}`.
    Tensor30, 3
);
tensor_type!(
    /// (1,3) tensor, entry `[i][j][k][l] = R^i_{jkl}`.
    Tensor13, 4
);
tensor_type!(
    /// Covariant 4-tensor.
    Tensor04, 4
);

fn adopt_all(
    chart: &Chart,
    what: &'static str,
    items: Vec<RationalExpr>,
    expected: usize,
) -> Result<Vec<RationalExpr>, GeomError> {
    if items.len() != expected {
        return Err(GeomError::Dimension {
            what,
            expected,
            got: items.len(),
        });
    }
    items.into_iter().map(|e| chart.adopt(e)).collect()
}

fn adopt_square(
    chart: &Chart,
    what: &'static str,
    rows: Vec<Vec<RationalExpr>>,
) -> Result<Vec<RationalExpr>, GeomError> {
    let n = chart.dim();
    if rows.len() != n {
        return Err(GeomError::Dimension {
            what,
            expected: n,
            got: rows.len(),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        data.extend(adopt_all(chart, what, row, n)?);
    }
    Ok(data)
}

fn check_antisymmetric(
    n: usize,
    data: &[RationalExpr],
    what: &'static str,
) -> Result<(), GeomError> {
    for i in 0..n {
        for j in i..n {
            if data[i * n + j] != -&data[j * n + i] {
                return Err(GeomError::NotAntisymmetric {
                    what,
                    indices: vec![i, j],
                });
            }
        }
    }
    Ok(())
}

impl VectorField {
    pub fn new(chart: &Chart, components: Vec<RationalExpr>) -> Result<Self, GeomError> {
        let data = adopt_all(chart, "vector field", components, chart.dim())?;
        Ok(VectorField {
            chart: chart.clone(),
            data,
        })
    }

    /// The coordinate field `∂_idx`.
    pub fn coordinate(chart: &Chart, idx: usize) -> Self {
        VectorField::from_fn(chart, |i| chart.kronecker(i[0], idx))
    }

    pub fn scale(&self, f: &RationalExpr) -> Self {
        self.map(|c| c * f)
    }
}

impl OneForm {
    pub fn new(chart: &Chart, components: Vec<RationalExpr>) -> Result<Self, GeomError> {
        let data = adopt_all(chart, "1-form", components, chart.dim())?;
        Ok(OneForm {
            chart: chart.clone(),
            data,
        })
    }

    /// The coordinate differential `dx^idx`.
    pub fn coordinate(chart: &Chart, idx: usize) -> Self {
        OneForm::from_fn(chart, |i| chart.kronecker(i[0], idx))
    }

    /// Differential of a scalar function.
    pub fn differential(chart: &Chart, f: &RationalExpr) -> Self {
        OneForm::from_fn(chart, |i| f.derivative(i[0]))
    }

    /// Contraction `θ(X) = θ_i X^i`.
    pub fn pair(&self, x: &VectorField) -> Result<RationalExpr, GeomError> {
        self.chart.same(&x.chart)?;
        Ok(crate::expr::sum(
            self.chart.coords(),
            self.data.iter().zip(x.data.iter()).map(|(a, b)| a * b),
        ))
    }
}

impl Tensor11 {
    pub fn new(chart: &Chart, rows: Vec<Vec<RationalExpr>>) -> Result<Self, GeomError> {
        let data = adopt_square(chart, "(1,1) tensor", rows)?;
        Ok(Tensor11 {
            chart: chart.clone(),
            data,
        })
    }

    pub fn identity(chart: &Chart) -> Self {
        Tensor11::from_fn(chart, |i| chart.kronecker(i[0], i[1]))
    }

    pub fn rows(&self) -> Vec<Vec<RationalExpr>> {
        self.data.chunks(self.dim()).map(<[_]>::to_vec).collect()
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Tensor11) -> Result<Tensor11, GeomError> {
        self.chart.same(&other.chart)?;
        let n = self.dim();
        Ok(Tensor11::from_fn(&self.chart, |ix| {
            crate::expr::sum(
                self.chart.coords(),
                (0..n).map(|a| &self[[ix[0], a]] * &other[[a, ix[1]]]),
            )
        }))
    }

    pub fn pow(&self, e: u32) -> Tensor11 {
        let mut acc = Tensor11::identity(&self.chart);
        for _ in 0..e {
            acc = acc.matmul(self).expect("same chart");
        }
        acc
    }

    /// `(KX)^i = K^i_j X^j`.
    pub fn apply(&self, x: &VectorField) -> Result<VectorField, GeomError> {
        self.chart.same(&x.chart)?;
        let n = self.dim();
        Ok(VectorField::from_fn(&self.chart, |ix| {
            crate::expr::sum(
                self.chart.coords(),
                (0..n).map(|a| &self[[ix[0], a]] * &x[[a]]),
            )
        }))
    }

    pub fn determinant(&self) -> RationalExpr {
        matrix::determinant(&self.rows(), self.chart.coords())
    }
}

impl TwoForm {
    pub fn new(chart: &Chart, rows: Vec<Vec<RationalExpr>>) -> Result<Self, GeomError> {
        let data = adopt_square(chart, "2-form", rows)?;
        check_antisymmetric(chart.dim(), &data, "2-form")?;
        Ok(TwoForm {
            chart: chart.clone(),
            data,
        })
    }
}

impl Bivector {
    pub fn new(chart: &Chart, rows: Vec<Vec<RationalExpr>>) -> Result<Self, GeomError> {
        let data = adopt_square(chart, "bivector", rows)?;
        check_antisymmetric(chart.dim(), &data, "bivector")?;
        Ok(Bivector {
            chart: chart.clone(),
            data,
        })
    }

    pub fn rows(&self) -> Vec<Vec<RationalExpr>> {
        self.data.chunks(self.dim()).map(<[_]>::to_vec).collect()
    }
}

impl VectorValuedTwoForm {
    pub fn new(chart: &Chart, components: Vec<RationalExpr>) -> Result<Self, GeomError> {
        let n = chart.dim();
        let data = adopt_all(chart, "vector-valued 2-form", components, n * n * n)?;
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    if data[(i * n + j) * n + k] != -&data[(i * n + k) * n + j] {
                        return Err(GeomError::NotAntisymmetric {
                            what: "vector-valued 2-form",
                            indices: vec![i, j, k],
                        });
                    }
                }
            }
        }
        Ok(VectorValuedTwoForm {
            chart: chart.clone(),
            data,
        })
    }
}

impl Tensor12 {
    /// Builds from nested components `c[i][j][k] = C^i_{jk}`.
    pub fn new(chart: &Chart, c: Vec<Vec<Vec<RationalExpr>>>) -> Result<Self, GeomError> {
        let n = chart.dim();
        if c.len() != n {
            return Err(GeomError::Dimension {
                what: "(1,2) tensor",
                expected: n,
                got: c.len(),
            });
        }
        let mut data = Vec::with_capacity(n * n * n);
        for slice in c {
            data.extend(adopt_square(chart, "(1,2) tensor", slice)?);
        }
        Ok(Tensor12 {
            chart: chart.clone(),
            data,
        })
    }

    /// First index `(i, j, k)` where `C^i_{jk} != C^i_{kj}`, with the difference.
    pub fn symmetry_defect(&self) -> Option<(Vec<usize>, RationalExpr)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in (j + 1)..n {
                    let d = &self[[i, j, k]] - &self[[i, k, j]];
                    if !d.is_zero() {
                        return Some((vec![i, j, k], d));
                    }
                }
            }
        }
        None
    }

    pub fn symmetrized(&self) -> Tensor12 {
        let half = crate::expr::Rational::new(1.into(), 2.into());
        Tensor12::from_fn(&self.chart, |ix| {
            (&self[[ix[0], ix[1], ix[2]]] + &self[[ix[0], ix[2], ix[1]]]).scale(&half)
        })
    }
}

impl Tensor03 {
    pub fn new(chart: &Chart, components: Vec<RationalExpr>) -> Result<Self, GeomError> {
        let n = chart.dim();
        let data = adopt_all(chart, "(0,3) tensor", components, n * n * n)?;
        Ok(Tensor03 {
            chart: chart.clone(),
            data,
        })
    }

    /// First index where `c` fails to be invariant under a transposition of its slots.
    pub fn total_symmetry_defect(&self) -> Option<Vec<usize>> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = &self[[i, j, k]];
                    if c != &self[[j, i, k]] || c != &self[[i, k, j]] {
                        return Some(vec![i, j, k]);
                    }
                }
            }
        }
        None
    }
}

/// Pseudo-Riemannian metric `g_{ij}` with its inverse `g^{ij}` computed once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    g: Tensor11,
    inverse: Tensor11,
}

impl Metric {
    pub fn new(chart: &Chart, rows: Vec<Vec<RationalExpr>>) -> Result<Self, GeomError> {
        let data = adopt_square(chart, "metric", rows)?;
        let n = chart.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(GeomError::NotSymmetric {
                        what: "metric",
                        indices: vec![i, j],
                    });
                }
            }
        }
        let g = Tensor11 {
            chart: chart.clone(),
            data,
        };
        let inv =
            matrix::inverse(&g.rows(), chart.coords()).ok_or(GeomError::Singular("metric"))?;
        let inverse = Tensor11 {
            chart: chart.clone(),
            data: inv.into_iter().flatten().collect(),
        };
        Ok(Metric { g, inverse })
    }

    pub fn chart(&self) -> &Chart {
        self.g.chart()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// `g_{ij}`.
    pub fn lower(&self, i: usize, j: usize) -> &RationalExpr {
        &self.g[[i, j]]
    }

    /// `g^{ij}`.
    pub fn upper(&self, i: usize, j: usize) -> &RationalExpr {
        &self.inverse[[i, j]]
    }

    pub fn rows(&self) -> Vec<Vec<RationalExpr>> {
        self.g.rows()
    }

    pub fn inverse_rows(&self) -> Vec<Vec<RationalExpr>> {
        self.inverse.rows()
    }
}
