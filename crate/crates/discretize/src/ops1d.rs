//! Second-order finite-difference stencils on uniform 1D grids with
//! Neumann (mirror-ghost) or periodic index closure.

use freezewave_core::{Field, Grid1D};

use crate::DiscretizeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilKind {
    FirstCentral,
    /// One-sided forward difference; upwind choice for a positive coefficient
    /// in `+ c v_x` (information enters from the right).
    FirstUpwindPos,
    /// One-sided backward difference for a negative coefficient.
    FirstUpwindNeg,
    SecondCentral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc1D {
    Neumann,
    Periodic,
}

#[derive(Debug, Clone)]
pub struct DiffOp1D {
    pub kind: StencilKind,
    pub grid: Grid1D,
    pub bc: Bc1D,
}

/// Neighbour index under the boundary closure: `off` is -1, 0 or +1.
#[inline]
pub fn closed_index(n: usize, i: usize, off: isize, bc: Bc1D) -> usize {
    let j = i as isize + off;
    match bc {
        Bc1D::Periodic => j.rem_euclid(n as isize) as usize,
        Bc1D::Neumann => {
            // mirror ghosts: v[-1] = v[1], v[n] = v[n-2]
            if j < 0 {
                (-j) as usize
            } else if j >= n as isize {
                2 * (n - 1) - j as usize
            } else {
                j as usize
            }
        }
    }
}

impl DiffOp1D {
    pub fn new(kind: StencilKind, grid: Grid1D, bc: Bc1D) -> Self {
        DiffOp1D { kind, grid, bc }
    }

    /// Stencil offsets and coefficients (already divided by the grid spacing).
    pub fn stencil(&self) -> Vec<(isize, f64)> {
        let h = self.grid.h();
        match self.kind {
            StencilKind::FirstCentral => vec![(-1, -0.5 / h), (1, 0.5 / h)],
            StencilKind::FirstUpwindPos => vec![(0, -1.0 / h), (1, 1.0 / h)],
            StencilKind::FirstUpwindNeg => vec![(-1, -1.0 / h), (0, 1.0 / h)],
            StencilKind::SecondCentral => {
                let h2 = h * h;
                vec![(-1, 1.0 / h2), (0, -2.0 / h2), (1, 1.0 / h2)]
            }
        }
    }

    pub fn apply(&self, v: &Field) -> Result<Field, DiscretizeError> {
        let grid = v
            .grid
            .as_1d()
            .ok_or_else(|| DiscretizeError::GridMismatch("expected a 1D field".into()))?;
        if *grid != self.grid {
            return Err(DiscretizeError::GridMismatch(
                "operator and field grids differ".into(),
            ));
        }
        let n = grid.n;
        let m = v.m;
        let stencil = self.stencil();
        let mut out = Field::zeros(self.grid.clone(), m);
        for i in 0..n {
            for &(off, coef) in &stencil {
                let j = closed_index(n, i, off, self.bc);
                for c in 0..m {
                    *out.at_mut(i, c) += coef * v.at(j, c);
                }
            }
        }
        Ok(out)
    }
}

/// First central derivative with Neumann closure; the workhorse for profile
/// derivatives.
pub fn d1_central(v: &Field) -> Result<Field, DiscretizeError> {
    let grid = v
        .grid
        .as_1d()
        .ok_or_else(|| DiscretizeError::GridMismatch("expected a 1D field".into()))?
        .clone();
    DiffOp1D::new(StencilKind::FirstCentral, grid, Bc1D::Neumann).apply(v)
}

pub fn d2_central(v: &Field) -> Result<Field, DiscretizeError> {
    let grid = v
        .grid
        .as_1d()
        .ok_or_else(|| DiscretizeError::GridMismatch("expected a 1D field".into()))?
        .clone();
    DiffOp1D::new(StencilKind::SecondCentral, grid, Bc1D::Neumann).apply(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use freezewave_core::Field;

    fn grid(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn second_central_zero_on_constants() {
        let g = grid(21);
        let v = Field::from_fn_1d(g.clone(), 1, |_| vec![3.7]);
        let op = DiffOp1D::new(StencilKind::SecondCentral, g, Bc1D::Neumann);
        let out = op.apply(&v).unwrap();
        assert!(out.max_abs() < 1e-12);
    }

    #[test]
    fn second_central_exact_on_quadratics_interior() {
        let g = grid(21);
        let v = Field::from_fn_1d(g.clone(), 1, |x| vec![x * x]);
        let op = DiffOp1D::new(StencilKind::SecondCentral, g, Bc1D::Neumann);
        let out = op.apply(&v).unwrap();
        for i in 1..20 {
            assert!((out.at(i, 0) - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn stencil_rows_sum_to_zero() {
        for kind in [
            StencilKind::FirstCentral,
            StencilKind::FirstUpwindPos,
            StencilKind::FirstUpwindNeg,
            StencilKind::SecondCentral,
        ] {
            let op = DiffOp1D::new(kind, grid(11), Bc1D::Neumann);
            let sum: f64 = op.stencil().iter().map(|(_, c)| c).sum();
            assert!(sum.abs() < 1e-12);
        }
    }

    #[test]
    fn neumann_derivative_of_even_symmetric_field_vanishes_at_boundary() {
        // cos(pi x) on [0,1] has even reflection symmetry at both ends.
        let g = grid(101);
        let v = Field::from_fn_1d(g.clone(), 1, |x| vec![(std::f64::consts::PI * x).cos()]);
        let op = DiffOp1D::new(StencilKind::FirstCentral, g, Bc1D::Neumann);
        let out = op.apply(&v).unwrap();
        assert!(out.at(0, 0).abs() < 1e-12);
        assert!(out.at(100, 0).abs() < 1e-12);
    }

    #[test]
    fn convergence_order_two_for_second_derivative() {
        // || D2 sin - (-sin) ||_inf drops by ~4 when h halves.
        let err = |n: usize| {
            let g = Grid1D::new(0.0, std::f64::consts::PI, n).unwrap();
            let v = Field::from_fn_1d(g.clone(), 1, |x| vec![x.sin()]);
            let out = DiffOp1D::new(StencilKind::SecondCentral, g.clone(), Bc1D::Neumann)
                .apply(&v)
                .unwrap();
            let mut e = 0.0f64;
            for i in 1..n - 1 {
                let x = g.node(i);
                e = e.max((out.at(i, 0) + x.sin()).abs());
            }
            e
        };
        let e1 = err(81);
        let e2 = err(161);
        let ratio = e1 / e2;
        assert!(
            (3.2..=4.8).contains(&ratio),
            "expected ~4x error drop, got {ratio}"
        );
    }

    #[test]
    fn upwind_is_first_order_one_sided() {
        let g = grid(11);
        let v = Field::from_fn_1d(g.clone(), 1, |x| vec![x]);
        let pos = DiffOp1D::new(StencilKind::FirstUpwindPos, g.clone(), Bc1D::Neumann)
            .apply(&v)
            .unwrap();
        let neg = DiffOp1D::new(StencilKind::FirstUpwindNeg, g, Bc1D::Neumann)
            .apply(&v)
            .unwrap();
        for i in 1..10 {
            assert!((pos.at(i.min(9), 0) - 1.0).abs() < 1e-12);
            assert!((neg.at(i, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_wraps_indices() {
        let n = 8;
        let g = Grid1D::periodic(0.0, 1.0, n).unwrap();
        let v = Field::from_fn_1d(g.clone(), 1, |x| {
            vec![(2.0 * std::f64::consts::PI * x).sin()]
        });
        let op = DiffOp1D::new(StencilKind::FirstCentral, g, Bc1D::Periodic);
        let out = op.apply(&v).unwrap();
        // Antisymmetry of the periodic central derivative of sin at x=0 vs x=1/2.
        assert!((out.at(0, 0) + out.at(4, 0)).abs() < 1e-12);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let op = DiffOp1D::new(StencilKind::FirstCentral, grid(11), Bc1D::Neumann);
        let v = Field::zeros(grid(12), 1);
        assert!(op.apply(&v).is_err());
    }
}
