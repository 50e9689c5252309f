//! Freezing-method PDAE solvers: 1D parabolic and hyperbolic systems,
//! second-order nonlinear wave equations, the cubic NLS, SE(2)-equivariant
//! 2D systems, and the decompose-and-freeze multi-wave solver.

pub mod freeze1d;
pub mod problem;
pub mod wave;

pub use freeze1d::{
    direct_simulate, run_freeze, steady_solve, Freeze1DOptions, Freeze1DRun, FreezeState1D,
    Stepper1D, TemplateProfile,
};
pub use problem::{cubic_nagumo, heat, quintic_nagumo, Kind1D, Problem1D};
pub use wave::{
    consistency_mu1, consistency_mu2, first_order_reduction, reduced_initial_data,
    wave_freeze_run, WaveFreezeOptions, WaveFreezeRun, WaveFreezeState, WaveProblem,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FreezeError {
    #[error("setup error: {0}")]
    Setup(String),
    #[error("Newton iteration failed to converge after {iters} iterations (residual {residual:.3e})")]
    NewtonDiverged { iters: usize, residual: f64 },
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("degenerate template or phase pairing: {0}")]
    DegenerateTemplate(String),
}
