//! Coordinate tensor calculus over [`RationalExpr`](crate::expr::RationalExpr).
//!
//! Index conventions: a [`Tensor11`] entry `[i][j]` is `K^i_j` and acts on column vectors of
//! components; a [`Tensor12`] entry `[i][j][k]` is `C^i_{jk}`; a [`Bivector`] entry `[i][j]` is
//! `P^{ij}`. Recursion operators act on 1-forms through the transpose, `(Kθ)_j = K^i_j θ_i`.

mod calculus;
mod chart;
mod matrix;
mod poisson;
mod riemannian;
mod tensor;

use thiserror::Error;

use crate::expr::ExprError;

pub use calculus::{
    coaction, contract_form_vv2form, exterior_derivative, haantjes_tensor, lie_bracket,
    lie_derivative, mult_apply, nijenhuis_torsion, tensor11_commutator, LieDerivative,
};
pub use chart::Chart;
pub use matrix::{determinant, inverse};
pub use poisson::{jacobi_residual, poisson_compatibility_residual, recursion_from_poisson};
pub(crate) use riemannian::nabla_c_residual;
pub use riemannian::{
    christoffel, covariant_derivative_vector, nabla_c_symmetry_residual, riemann,
};
pub use tensor::{
    Bivector, Christoffel, Metric, OneForm, Residual, Tensor03, Tensor04, Tensor11, Tensor12,
    Tensor13, Tensor30, TwoForm, VectorField, VectorValuedTwoForm,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("{what}: expected {expected} components, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} is not antisymmetric at {indices:?}")]
    NotAntisymmetric {
        what: &'static str,
        indices: Vec<usize>,
    },
    #[error("{what} is not symmetric at {indices:?}")]
    NotSymmetric {
        what: &'static str,
        indices: Vec<usize>,
    },
    #[error("{0} is singular (determinant is the zero expression)")]
    Singular(&'static str),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
