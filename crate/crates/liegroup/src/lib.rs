//! SE(d) group and se(d) algebra arithmetic for d in {1, 2} (d = 3 for the
//! ad-spectrum only): exponential, action on fields, action derivative,
//! bracket and symmetry eigenfunctions.

pub mod action;
pub mod algebra;
pub mod group;

pub use action::{action_derivative, group_action, symmetry_eigenpairs, SymmetryEigenpair};
pub use algebra::{
    ad_matrix, ad_spectrum, ad_spectrum_formula, bracket, embedded_eigenvalues, skew_eigenvalues,
    SEAlgebraElement,
};
pub use group::{compose, exp_se, inverse, SEGroupElement};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieGroupError {
    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not a rotation: {0}")]
    NotOrthogonal(String),
    #[error("dense eigensolve failed: {0}")]
    LinAlg(String),
    #[error("stencil application failed: {0}")]
    Discretize(String),
}
