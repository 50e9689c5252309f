//! Shared data model for the freezewave toolkit: grids, sampled fields,
//! run configuration, time-series logging and persistence.

pub mod config;
pub mod error;
pub mod field;
pub mod grid;
pub mod inner;
pub mod io;
pub mod timeseries;

pub use config::RunConfig;
pub use error::CoreError;
pub use field::Field;
pub use grid::{Grid, Grid1D, Grid2D};
pub use inner::{l2_inner, l2_norm};
pub use timeseries::TimeSeries;
