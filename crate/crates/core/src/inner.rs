use crate::error::CoreError;
use crate::field::Field;
use crate::grid::Grid;

/// Composite trapezoidal quadrature weight of node `i` on a 1D grid
/// (`h/2` at the endpoints, `h` inside).
pub fn trapezoid_weight_1d(n: usize, h: f64, i: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// Quadrature weights for every node of a grid (tensor-product trapezoid in 2D).
pub fn quadrature_weights(grid: &Grid) -> Vec<f64> {
    match grid {
        Grid::One(g) => {
            let h = g.h();
            (0..g.n).map(|i| trapezoid_weight_1d(g.n, h, i)).collect()
        }
        Grid::Two(g) => {
            let h = g.h();
            let n = g.n_per_axis;
            let mut w = Vec::with_capacity(n * n);
            for j in 0..n {
                let wj = trapezoid_weight_1d(n, h, j);
                for i in 0..n {
                    w.push(wj * trapezoid_weight_1d(n, h, i));
                }
            }
            w
        }
    }
}

/// Discrete L2 inner product of two fields by the composite trapezoidal rule,
/// summed over components.
pub fn l2_inner(f: &Field, g: &Field) -> Result<f64, CoreError> {
    f.compatible(g)?;
    let w = quadrature_weights(&f.grid);
    let m = f.m;
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate() {
        let mut dot = 0.0;
        for c in 0..m {
            dot += f.at(i, c) * g.at(i, c);
        }
        acc += wi * dot;
    }
    Ok(acc)
}

pub fn l2_norm(f: &Field) -> f64 {
    l2_inner(f, f).expect("field is compatible with itself").sqrt()
}
