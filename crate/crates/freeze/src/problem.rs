//! Problem definitions for the 1D solvers: reaction-diffusion systems
//! `u_t = A u_xx + f(u, u_x)` and hyperbolic systems `u_t = E u_x + f(u)`.

use std::sync::Arc;

use ndarray::Array2;
use ndarray_linalg::Eig;

use crate::FreezeError;

/// Pointwise callback writing `m` outputs for inputs `(u, u_x)`.
pub type PointFn = Arc<dyn Fn(&[f64], &[f64], &mut [f64]) + Send + Sync>;

/// Characteristic data of a real-diagonalizable transport matrix E = T L T^-1.
#[derive(Debug, Clone)]
pub struct Characteristics {
    pub t: Vec<f64>,
    pub t_inv: Vec<f64>,
    pub lambdas: Vec<f64>,
}

#[derive(Clone)]
pub enum Kind1D {
    Parabolic,
    Hyperbolic(Characteristics),
}

/// 1D evolution problem; `a` is the diffusion matrix (zero for hyperbolic
/// runs), `e` the transport matrix (zero for parabolic runs), both m x m
/// row-major. `d1f`/`d2f` write the m x m Jacobians of `f` with respect to
/// `u` and `u_x`.
#[derive(Clone)]
pub struct Problem1D {
    pub m: usize,
    pub a: Vec<f64>,
    pub e: Vec<f64>,
    pub kind: Kind1D,
    pub f: PointFn,
    pub d1f: PointFn,
    pub d2f: PointFn,
}

fn zero_fn(m: usize, square: bool) -> PointFn {
    let len = if square { m * m } else { m };
    Arc::new(move |_u: &[f64], _ux: &[f64], out: &mut [f64]| {
        out[..len].fill(0.0);
    })
}

impl Problem1D {
    pub fn parabolic(m: usize, a: Vec<f64>, f: PointFn, d1f: PointFn, d2f: PointFn) -> Self {
        assert_eq!(a.len(), m * m);
        Problem1D {
            m,
            a,
            e: vec![0.0; m * m],
            kind: Kind1D::Parabolic,
            f,
            d1f,
            d2f,
        }
    }

    /// Hyperbolic problem `u_t = E u_x + f(u)`; E must be real diagonalizable
    /// (checked here, complex eigenvalues are a setup rejection).
    pub fn hyperbolic(m: usize, e: Vec<f64>, f: PointFn, d1f: PointFn) -> Result<Self, FreezeError> {
        assert_eq!(e.len(), m * m);
        let chars = diagonalize_real(m, &e)?;
        Ok(Problem1D {
            m,
            a: vec![0.0; m * m],
            e,
            kind: Kind1D::Hyperbolic(chars),
            f,
            d1f,
            d2f: zero_fn(m, true),
        })
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.kind, Kind1D::Hyperbolic(_))
    }
}

/// Real eigen-decomposition of a (small) matrix; rejects complex spectra.
pub fn diagonalize_real(m: usize, e: &[f64]) -> Result<Characteristics, FreezeError> {
    let mut arr = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            arr[(i, j)] = e[i * m + j];
        }
    }
    let (vals, vecs) = arr
        .eig()
        .map_err(|err| FreezeError::Setup(format!("eigensolve failed: {err}")))?;
    let scale = e.iter().fold(1e-300, |acc: f64, x| acc.max(x.abs()));
    for v in vals.iter() {
        if v.im.abs() > 1e-10 * scale {
            return Err(FreezeError::Setup(format!(
                "transport matrix has complex eigenvalue {v}; not real diagonalizable"
            )));
        }
    }
    let lambdas: Vec<f64> = vals.iter().map(|v| v.re).collect();
    let t: Vec<f64> = {
        let mut t = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                t[i * m + j] = vecs[(i, j)].re;
            }
        }
        t
    };
    let t_inv = invert_dense(m, &t).ok_or_else(|| {
        FreezeError::Setup("eigenvector matrix is singular; not diagonalizable".into())
    })?;
    Ok(Characteristics { t, t_inv, lambdas })
}

/// Dense inverse by Gauss-Jordan with partial pivoting; None when singular.
pub fn invert_dense(n: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut aug = vec![0.0; n * 2 * n];
    for i in 0..n {
        for j in 0..n {
            aug[i * 2 * n + j] = a[i * n + j];
        }
        aug[i * 2 * n + n + i] = 1.0;
    }
    for k in 0..n {
        let mut piv = k;
        let mut mag = aug[k * 2 * n + k].abs();
        for i in k + 1..n {
            let m2 = aug[i * 2 * n + k].abs();
            if m2 > mag {
                mag = m2;
                piv = i;
            }
        }
        if mag < 1e-300 {
            return None;
        }
        if piv != k {
            for j in 0..2 * n {
                aug.swap(k * 2 * n + j, piv * 2 * n + j);
            }
        }
        let p = aug[k * 2 * n + k];
        for j in 0..2 * n {
            aug[k * 2 * n + j] /= p;
        }
        for i in 0..n {
            if i != k {
                let factor = aug[i * 2 * n + k];
                if factor != 0.0 {
                    for j in 0..2 * n {
                        aug[i * 2 * n + j] -= factor * aug[k * 2 * n + j];
                    }
                }
            }
        }
    }
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            inv[i * n + j] = aug[i * 2 * n + n + j];
        }
    }
    Some(inv)
}

/// Quintic Nagumo nonlinearity `f(u) = -prod_i (u - b_i)` with the analytic
/// derivative; requires 0 = b1 < b2 < b3 < b4 < b5 = 1.
pub fn quintic_nagumo(b: [f64; 5]) -> Result<Problem1D, FreezeError> {
    if b[0] != 0.0 || b[4] != 1.0 || !(b[0] < b[1] && b[1] < b[2] && b[2] < b[3] && b[3] < b[4]) {
        return Err(FreezeError::Setup(format!(
            "quintic roots must satisfy 0 = b1 < b2 < b3 < b4 < b5 = 1, got {b:?}"
        )));
    }
    let bf = b;
    let f: PointFn = Arc::new(move |u: &[f64], _ux: &[f64], out: &mut [f64]| {
        out[0] = -bf.iter().map(|bi| u[0] - bi).product::<f64>();
    });
    let bd = b;
    let d1f: PointFn = Arc::new(move |u: &[f64], _ux: &[f64], out: &mut [f64]| {
        let mut acc = 0.0;
        for j in 0..5 {
            let mut prod = 1.0;
            for (i, bi) in bd.iter().enumerate() {
                if i != j {
                    prod *= u[0] - bi;
                }
            }
            acc -= prod;
        }
        out[0] = acc;
    });
    Ok(Problem1D::parabolic(
        1,
        vec![1.0],
        f,
        d1f,
        zero_fn(1, true),
    ))
}

/// Cubic Nagumo `f(u) = u (1 - u)(u - a)`; the decreasing front between 1 and
/// 0 travels at the classical speed `sqrt(2) (1/2 - a)`.
pub fn cubic_nagumo(a: f64) -> Problem1D {
    let f: PointFn = Arc::new(move |u: &[f64], _ux: &[f64], out: &mut [f64]| {
        out[0] = u[0] * (1.0 - u[0]) * (u[0] - a);
    });
    let d1f: PointFn = Arc::new(move |u: &[f64], _ux: &[f64], out: &mut [f64]| {
        // d/du [u(1-u)(u-a)] = -3u^2 + 2(1+a)u - a
        out[0] = -3.0 * u[0] * u[0] + 2.0 * (1.0 + a) * u[0] - a;
    });
    Problem1D::parabolic(1, vec![1.0], f, d1f, zero_fn(1, true))
}

/// Pure heat equation `u_t = u_xx` (scalar).
pub fn heat() -> Problem1D {
    Problem1D::parabolic(1, vec![1.0], zero_fn(1, false), zero_fn(1, true), zero_fn(1, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_f(p: &Problem1D, u: f64) -> f64 {
        let mut out = [0.0];
        (p.f)(&[u], &[0.0], &mut out);
        out[0]
    }

    #[test]
    fn quintic_roots_are_roots() {
        let p = quintic_nagumo([0.0, 2.0 / 5.0, 0.5, 17.0 / 20.0, 1.0]).unwrap();
        assert_eq!(eval_f(&p, 0.0), 0.0);
        assert_eq!(eval_f(&p, 1.0), 0.0);
        assert_eq!(eval_f(&p, 0.5), 0.0);
    }

    #[test]
    fn quintic_value_matches_product_oracle() {
        let b = [0.0, 2.0 / 5.0, 0.5, 17.0 / 20.0, 1.0];
        let p = quintic_nagumo(b).unwrap();
        let u = 0.25;
        // Oracle: direct product evaluation.
        let expect = -(u - 0.0) * (u - 0.4) * (u - 0.5) * (u - 0.85) * (u - 1.0);
        assert!((eval_f(&p, u) - expect).abs() < 1e-15);
        assert!((expect - (-(0.25) * (-0.15) * (-0.25) * (-0.6) * (-0.75))).abs() < 1e-15);
    }

    #[test]
    fn quintic_ordering_violation_rejected() {
        assert!(quintic_nagumo([0.0, 0.5, 0.4, 0.85, 1.0]).is_err());
        assert!(quintic_nagumo([0.1, 0.2, 0.4, 0.85, 1.0]).is_err());
    }

    #[test]
    fn quintic_derivative_matches_finite_differences() {
        let p = quintic_nagumo([0.0, 2.0 / 5.0, 0.5, 17.0 / 20.0, 1.0]).unwrap();
        let mut d = [0.0];
        for &u in &[0.1, 0.33, 0.77, 0.99] {
            (p.d1f)(&[u], &[0.0], &mut d);
            let eps = 1e-6;
            let fd = (eval_f(&p, u + eps) - eval_f(&p, u - eps)) / (2.0 * eps);
            assert!((d[0] - fd).abs() < 1e-7, "at {u}: {} vs {}", d[0], fd);
        }
    }

    #[test]
    fn hyperbolic_rejects_complex_spectrum() {
        // rotation matrix has eigenvalues +-i
        let e = vec![0.0, -1.0, 1.0, 0.0];
        let f: PointFn = Arc::new(|_u, _ux, out: &mut [f64]| out.fill(0.0));
        let d: PointFn = Arc::new(|_u, _ux, out: &mut [f64]| out.fill(0.0));
        assert!(Problem1D::hyperbolic(2, e, f, d).is_err());
    }

    #[test]
    fn hyperbolic_accepts_diagonalizable() {
        let e = vec![0.0, 1.0, 1.0, 0.0]; // eigenvalues +-1
        let f: PointFn = Arc::new(|_u, _ux, out: &mut [f64]| out.fill(0.0));
        let d: PointFn = Arc::new(|_u, _ux, out: &mut [f64]| out.fill(0.0));
        let p = Problem1D::hyperbolic(2, e, f, d).unwrap();
        match &p.kind {
            Kind1D::Hyperbolic(ch) => {
                let mut ls = ch.lambdas.clone();
                ls.sort_by(|a, b| a.partial_cmp(b).unwrap());
                assert!((ls[0] + 1.0).abs() < 1e-12 && (ls[1] - 1.0).abs() < 1e-12);
            }
            _ => panic!("expected hyperbolic"),
        }
    }

    #[test]
    fn dense_inverse_round_trip() {
        let a = vec![2.0, 1.0, 0.5, 1.0, 3.0, -1.0, 0.0, 1.0, 1.5];
        let inv = invert_dense(3, &a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += a[i * 3 + k] * inv[k * 3 + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((acc - target).abs() < 1e-12);
            }
        }
    }
}
