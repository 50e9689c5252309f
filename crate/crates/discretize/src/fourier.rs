//! Fourier-spectral differentiation and symbol multiplication on uniform
//! periodic grids (nodes `x_- + j h`, `j = 0..n`, period `n h`).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use freezewave_core::{Field, Grid1D};

use crate::DiscretizeError;

/// Planned forward/inverse transforms of a fixed length.
pub struct FourierWorkspace {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FourierWorkspace {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        FourierWorkspace {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n);
        self.forward.process(data);
    }

    /// Normalized inverse: `inverse(forward(v)) == v`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n);
        self.inverse.process(data);
        let scale = 1.0 / self.n as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

/// Angular wavenumbers in FFT ordering for a grid of `n` nodes and the given
/// period: `2*pi/period * [0, 1, ..., n/2, -(n/2-1), ..., -1]`.
pub fn wavenumbers(n: usize, period: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / period;
    (0..n)
        .map(|j| {
            let k = if j <= n / 2 {
                j as isize
            } else {
                j as isize - n as isize
            };
            base * k as f64
        })
        .collect()
}

/// Multiplies mode `j` by `symbol[j]` (in place, physical space in/out).
pub fn fourier_symbol_multiply(
    ws: &FourierWorkspace,
    data: &mut [Complex64],
    symbol: &[Complex64],
) {
    assert_eq!(data.len(), symbol.len());
    ws.forward(data);
    for (z, s) in data.iter_mut().zip(symbol) {
        *z *= s;
    }
    ws.inverse(data);
}

/// Spectral derivative of the given order on complex samples.
///
/// For odd orders the Nyquist mode is zeroed (its derivative has no
/// consistent sign on an even grid).
pub fn fourier_derivative_complex(
    ws: &FourierWorkspace,
    data: &mut [Complex64],
    order: u32,
    period: f64,
) {
    let n = data.len();
    let ks = wavenumbers(n, period);
    let symbol: Vec<Complex64> = ks
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            if order % 2 == 1 && n % 2 == 0 && j == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k).powu(order)
            }
        })
        .collect();
    fourier_symbol_multiply(ws, data, &symbol);
}

/// Period of a grid under the periodic convention (`n * h`).
pub fn grid_period(grid: &Grid1D) -> f64 {
    grid.n as f64 * grid.h()
}

/// Spectral derivative of a real field on a periodic grid, componentwise.
pub fn fourier_derivative(v: &Field, order: u32) -> Result<Field, DiscretizeError> {
    let grid = v
        .grid
        .as_1d()
        .ok_or_else(|| DiscretizeError::NotPeriodic("expected a 1D periodic field".into()))?
        .clone();
    let n = grid.n;
    let ws = FourierWorkspace::new(n);
    let period = grid_period(&grid);
    let mut out = Field::zeros(grid, v.m);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..v.m {
        for i in 0..n {
            buf[i] = Complex64::new(v.at(i, c), 0.0);
        }
        fourier_derivative_complex(&ws, &mut buf, order, period);
        for i in 0..n {
            *out.at_mut(i, c) = buf[i].re;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derivative_of_sin_is_k_cos() {
        let n = 64;
        let g = Grid1D::periodic(0.0, 2.0 * PI, n).unwrap();
        let k = 3.0;
        let v = Field::from_fn_1d(g.clone(), 1, |x| vec![(k * x).sin()]);
        let d = fourier_derivative(&v, 1).unwrap();
        for i in 0..n {
            let x = g.node(i);
            assert!((d.at(i, 0) - k * (k * x).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn order_zero_with_unit_symbol_is_identity() {
        let n = 32;
        let ws = FourierWorkspace::new(n);
        let mut data: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let orig = data.clone();
        let symbol = vec![Complex64::new(1.0, 0.0); n];
        fourier_symbol_multiply(&ws, &mut data, &symbol);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_of_complex_exponential() {
        // Oracle: e^{ix} is an eigenfunction of d^2/dx^2 with eigenvalue -1.
        let n = 64;
        let ws = FourierWorkspace::new(n);
        let h = 2.0 * PI / n as f64;
        let mut data: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(0.0, -PI + j as f64 * h).exp())
            .collect();
        let orig = data.clone();
        fourier_derivative_complex(&ws, &mut data, 2, 2.0 * PI);
        for (d, o) in data.iter().zip(&orig) {
            assert!((d + o).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_forward_inverse() {
        let n = 128;
        let ws = FourierWorkspace::new(n);
        let mut data: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.11).sin(), (i as f64).cos()))
            .collect();
        let orig = data.clone();
        ws.forward(&mut data);
        ws.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
