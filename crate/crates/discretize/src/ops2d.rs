//! Five-point Laplacian and gradient components on the square grid,
//! Neumann closure by mirror ghosts.

use freezewave_core::{Field, Grid2D};

use crate::DiscretizeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil2D {
    Laplacian5,
    /// Central first derivative in the given axis (0 or 1).
    Grad(usize),
}

#[derive(Debug, Clone)]
pub struct DiffOp2D {
    pub kind: Stencil2D,
    pub grid: Grid2D,
}

#[inline]
fn mirror(n: usize, j: isize) -> usize {
    if j < 0 {
        (-j) as usize
    } else if j >= n as isize {
        2 * (n - 1) - j as usize
    } else {
        j as usize
    }
}

impl DiffOp2D {
    pub fn new(kind: Stencil2D, grid: Grid2D) -> Self {
        DiffOp2D { kind, grid }
    }

    pub fn apply(&self, v: &Field) -> Result<Field, DiscretizeError> {
        let grid = v
            .grid
            .as_2d()
            .ok_or_else(|| DiscretizeError::GridMismatch("expected a 2D field".into()))?;
        if *grid != self.grid {
            return Err(DiscretizeError::GridMismatch(
                "operator and field grids differ".into(),
            ));
        }
        let n = grid.n_per_axis;
        let m = v.m;
        let h = grid.h();
        let mut out = Field::zeros(self.grid.clone(), m);
        let idx = |i: usize, j: usize| j * n + i;
        match self.kind {
            Stencil2D::Laplacian5 => {
                let h2 = h * h;
                for j in 0..n {
                    for i in 0..n {
                        let w = idx(mirror(n, i as isize - 1), j);
                        let e = idx(mirror(n, i as isize + 1), j);
                        let s = idx(i, mirror(n, j as isize - 1));
                        let nn = idx(i, mirror(n, j as isize + 1));
                        let c = idx(i, j);
                        for comp in 0..m {
                            *out.at_mut(c, comp) = (v.at(w, comp)
                                + v.at(e, comp)
                                + v.at(s, comp)
                                + v.at(nn, comp)
                                - 4.0 * v.at(c, comp))
                                / h2;
                        }
                    }
                }
            }
            Stencil2D::Grad(axis) => {
                if axis > 1 {
                    return Err(DiscretizeError::GridMismatch(format!(
                        "gradient axis {axis} out of range"
                    )));
                }
                for j in 0..n {
                    for i in 0..n {
                        let (lo, hi) = if axis == 0 {
                            (
                                idx(mirror(n, i as isize - 1), j),
                                idx(mirror(n, i as isize + 1), j),
                            )
                        } else {
                            (
                                idx(i, mirror(n, j as isize - 1)),
                                idx(i, mirror(n, j as isize + 1)),
                            )
                        };
                        let c = idx(i, j);
                        for comp in 0..m {
                            *out.at_mut(c, comp) = (v.at(hi, comp) - v.at(lo, comp)) / (2.0 * h);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
