use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::grid::Grid;

/// Sampled vector-valued function on a grid: `m` components per node,
/// stored node-major (`values[node * m + component]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub grid: Grid,
    pub m: usize,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(grid: impl Into<Grid>, m: usize, values: Vec<f64>) -> Result<Self, CoreError> {
        let grid = grid.into();
        if m == 0 {
            return Err(CoreError::InvalidValue("field needs m >= 1".into()));
        }
        if values.len() != grid.node_count() * m {
            return Err(CoreError::DimensionMismatch(format!(
                "field values length {} != {} nodes x {} components",
                values.len(),
                grid.node_count(),
                m
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::InvalidValue(
                "field contains non-finite values".into(),
            ));
        }
        Ok(Field { grid, m, values })
    }

    pub fn zeros(grid: impl Into<Grid>, m: usize) -> Self {
        let grid = grid.into();
        let n = grid.node_count();
        Field {
            grid,
            m,
            values: vec![0.0; n * m],
        }
    }

    /// Sample a function of the node coordinates; `f` returns the `m` components.
    pub fn from_fn_1d(grid: crate::grid::Grid1D, m: usize, f: impl Fn(f64) -> Vec<f64>) -> Self {
        let mut values = Vec::with_capacity(grid.n * m);
        for x in grid.nodes() {
            let comps = f(x);
            assert_eq!(comps.len(), m, "component count mismatch in from_fn_1d");
            values.extend_from_slice(&comps);
        }
        Field {
            grid: Grid::One(grid),
            m,
            values,
        }
    }

    pub fn from_fn_2d(
        grid: crate::grid::Grid2D,
        m: usize,
        f: impl Fn(f64, f64) -> Vec<f64>,
    ) -> Self {
        let n = grid.node_count();
        let mut values = Vec::with_capacity(n * m);
        for idx in 0..n {
            let (x1, x2) = grid.node(idx);
            let comps = f(x1, x2);
            assert_eq!(comps.len(), m, "component count mismatch in from_fn_2d");
            values.extend_from_slice(&comps);
        }
        Field {
            grid: Grid::Two(grid),
            m,
            values,
        }
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }

    /// Value of component `c` at node `i`.
    pub fn at(&self, i: usize, c: usize) -> f64 {
        self.values[i * self.m + c]
    }

    pub fn at_mut(&mut self, i: usize, c: usize) -> &mut f64 {
        &mut self.values[i * self.m + c]
    }

    /// Checks that `other` lives on the same grid with the same component count.
    pub fn compatible(&self, other: &Field) -> Result<(), CoreError> {
        if self.grid != other.grid {
            return Err(CoreError::DimensionMismatch(
                "fields on different grids".into(),
            ));
        }
        if self.m != other.m {
            return Err(CoreError::DimensionMismatch(format!(
                "component count mismatch: {} vs {}",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            m: self.m,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise linear combination `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Field) -> Field {
        debug_assert_eq!(self.values.len(), other.values.len());
        Field {
            grid: self.grid.clone(),
            m: self.m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}
