//! Finite-difference and Fourier-spectral spatial operators plus banded
//! linear algebra; the method-of-lines backbone for the freezewave solvers.

pub mod banded;
pub mod fourier;
pub mod ops1d;
pub mod ops2d;

pub use banded::{banded_solve, BandScalar, BandedLu, BandedMatrix};
pub use fourier::{
    fourier_derivative, fourier_derivative_complex, fourier_symbol_multiply, grid_period,
    wavenumbers, FourierWorkspace,
};
pub use ops1d::{closed_index, d1_central, d2_central, Bc1D, DiffOp1D, StencilKind};
pub use ops2d::{DiffOp2D, Stencil2D};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiscretizeError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("matrix is singular at column {column}")]
    Singular { column: usize },
    #[error("matrix is singular to working tolerance (pivot ratio {ratio:.3e})")]
    NearSingular { ratio: f64 },
    #[error("operation requires a periodic grid: {0}")]
    NotPeriodic(String),
}
