use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Uniform grid on the interval `[x_minus, x_plus]` with `n` nodes at both endpoints.
///
/// Spacing is `h = (x_plus - x_minus) / (n - 1)`. Fourier-based solvers use the
/// convention that the node set is `x_minus + j h`, `j = 0..n`, and the stored
/// `x_plus` is the last node of a period of length `n * h` (right endpoint of the
/// physical period excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_minus: f64,
    pub x_plus: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x_minus: f64, x_plus: f64, n: usize) -> Result<Self, CoreError> {
        if !(x_minus < x_plus) {
            return Err(CoreError::InvalidValue(format!(
                "grid interval [{x_minus}, {x_plus}] is empty"
            )));
        }
        if n < 3 {
            return Err(CoreError::InvalidValue(format!(
                "grid needs at least 3 nodes, got {n}"
            )));
        }
        Ok(Grid1D {
            x_minus,
            x_plus,
            n,
        })
    }

    /// Periodic grid covering `[x_minus, x_minus + period)` with `n` nodes;
    /// the stored `x_plus` is the last node `x_minus + (n-1) h`, `h = period / n`.
    pub fn periodic(x_minus: f64, period: f64, n: usize) -> Result<Self, CoreError> {
        if !(period > 0.0) {
            return Err(CoreError::InvalidValue(format!("period {period} <= 0")));
        }
        let h = period / n as f64;
        Grid1D::new(x_minus, x_minus + (n as f64 - 1.0) * h, n)
    }

    pub fn h(&self) -> f64 {
        (self.x_plus - self.x_minus) / (self.n as f64 - 1.0)
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_minus + i as f64 * self.h()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }
}

/// Uniform grid on the square `[-half_width, half_width]^2` with `n_per_axis`
/// nodes per axis. Node ordering is row-major lexicographic with the first
/// coordinate fastest: node `(i, j)` has linear index `j * n_per_axis + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub half_width: f64,
    pub n_per_axis: usize,
}

impl Grid2D {
    pub fn new(half_width: f64, n_per_axis: usize) -> Result<Self, CoreError> {
        if !(half_width > 0.0) {
            return Err(CoreError::InvalidValue(format!(
                "half_width {half_width} <= 0"
            )));
        }
        if n_per_axis < 3 {
            return Err(CoreError::InvalidValue(format!(
                "grid needs at least 3 nodes per axis, got {n_per_axis}"
            )));
        }
        Ok(Grid2D {
            half_width,
            n_per_axis,
        })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.n_per_axis as f64 - 1.0)
    }

    pub fn node_count(&self) -> usize {
        self.n_per_axis * self.n_per_axis
    }

    /// Coordinates of the node with linear index `idx`.
    pub fn node(&self, idx: usize) -> (f64, f64) {
        let i = idx % self.n_per_axis;
        let j = idx / self.n_per_axis;
        let h = self.h();
        (
            -self.half_width + i as f64 * h,
            -self.half_width + j as f64 * h,
        )
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_per_axis + i
    }
}

/// A 1D or 2D grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Grid {
    #[serde(rename = "grid1d")]
    One(Grid1D),
    #[serde(rename = "grid2d")]
    Two(Grid2D),
}

impl Grid {
    pub fn node_count(&self) -> usize {
        match self {
            Grid::One(g) => g.n,
            Grid::Two(g) => g.node_count(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Grid::One(_) => 1,
            Grid::Two(_) => 2,
        }
    }

    pub fn as_1d(&self) -> Option<&Grid1D> {
        match self {
            Grid::One(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_2d(&self) -> Option<&Grid2D> {
        match self {
            Grid::Two(g) => Some(g),
            _ => None,
        }
    }
}

impl From<Grid1D> for Grid {
    fn from(g: Grid1D) -> Self {
        Grid::One(g)
    }
}

impl From<Grid2D> for Grid {
    fn from(g: Grid2D) -> Self {
        Grid::Two(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid1d_spacing() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        assert!((g.h() - 0.1).abs() < 1e-15);
        assert_eq!(g.n, 11);
        assert!((g.node(10) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid1d_rejects_bad_input() {
        assert!(Grid1D::new(1.0, 0.0, 11).is_err());
        assert!(Grid1D::new(0.0, 1.0, 2).is_err());
    }

    #[test]
    fn grid2d_indexing_is_lexicographic_x1_fastest() {
        let g = Grid2D::new(1.0, 3).unwrap();
        assert_eq!(g.index(1, 0), 1);
        assert_eq!(g.index(0, 1), 3);
        let (x1, x2) = g.node(1);
        assert!((x1 - 0.0).abs() < 1e-15 && (x2 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_grid_excludes_right_endpoint() {
        let g = Grid1D::periodic(-1.0, 2.0, 4).unwrap();
        assert!((g.h() - 0.5).abs() < 1e-15);
        assert!((g.x_plus - 0.5).abs() < 1e-15);
    }
}
