//! Freezing for second-order nonlinear wave equations
//! `M u_tt = A u_xx + f(u, u_x, u_t)`: consistency conditions for the
//! initial data, a BDF2/Newton solver in companion form `(v, w = v_t)` with
//! the single algebraic unknown `mu_2`, and the first-order reduction used
//! as an independent cross-check path.

use std::sync::Arc;

use freezewave_core::inner::quadrature_weights;
use freezewave_core::timeseries::TsRow;
use freezewave_core::{l2_inner, Field, Grid1D, TimeSeries};
use freezewave_discretize::{closed_index, d1_central, d2_central, BandedMatrix, Bc1D};

use crate::problem::{diagonalize_real, invert_dense, Problem1D};
use crate::FreezeError;
use crate::TemplateProfile;

/// Pointwise callback on `(u, u_x, u_t)`.
pub type WaveFn = Arc<dyn Fn(&[f64], &[f64], &[f64], &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub struct WaveProblem {
    pub m: usize,
    /// M, row-major.
    pub mass: Vec<f64>,
    pub mass_inv: Vec<f64>,
    /// A, row-major.
    pub a: Vec<f64>,
    pub f: WaveFn,
    pub d1f: WaveFn,
    pub d2f: WaveFn,
    pub d3f: WaveFn,
    /// N = (M^-1 A)^(1/2) and its inverse, for the first-order reduction.
    pub n_sqrt: Vec<f64>,
    pub n_sqrt_inv: Vec<f64>,
}

impl WaveProblem {
    pub fn new(
        m: usize,
        mass: Vec<f64>,
        a: Vec<f64>,
        f: WaveFn,
        d1f: WaveFn,
        d2f: WaveFn,
        d3f: WaveFn,
    ) -> Result<Self, FreezeError> {
        assert_eq!(mass.len(), m * m);
        assert_eq!(a.len(), m * m);
        let mass_inv = invert_dense(m, &mass)
            .ok_or_else(|| FreezeError::Setup("mass matrix M is singular".into()))?;
        // M^-1 A must be diagonalizable with positive eigenvalues
        let minv_a = mat_mul(m, &mass_inv, &a);
        let ch = diagonalize_real(m, &minv_a)?;
        if ch.lambdas.iter().any(|l| *l <= 0.0) {
            return Err(FreezeError::Setup(format!(
                "M^-1 A has non-positive eigenvalue(s) {:?}",
                ch.lambdas
            )));
        }
        // N = T sqrt(L) T^-1
        let mut n_sqrt = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for k in 0..m {
                    acc += ch.t[i * m + k] * ch.lambdas[k].sqrt() * ch.t_inv[k * m + j];
                }
                n_sqrt[i * m + j] = acc;
            }
        }
        let n_sqrt_inv = invert_dense(m, &n_sqrt)
            .ok_or_else(|| FreezeError::Setup("square root N is singular".into()))?;
        Ok(WaveProblem {
            m,
            mass,
            mass_inv,
            a,
            f,
            d1f,
            d2f,
            d3f,
            n_sqrt,
            n_sqrt_inv,
        })
    }

    /// Scalar quintic Nagumo wave equation `M u_tt = u_xx + f(u) - u_t` with
    /// the quintic reaction term and unit damping; for M -> 0 it limits onto
    /// the parabolic quintic Nagumo equation and shares its front velocity to
    /// leading order.
    pub fn quintic_nagumo_wave(mass: f64, b: [f64; 5]) -> Result<Self, FreezeError> {
        let bf = b;
        let f: WaveFn = Arc::new(move |u, _ux, ut, out: &mut [f64]| {
            out[0] = -bf.iter().map(|bi| u[0] - bi).product::<f64>() - ut[0];
        });
        let bd = b;
        let d1f: WaveFn = Arc::new(move |u, _ux, _ut, out: &mut [f64]| {
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
        let zero: WaveFn = Arc::new(|_u, _ux, _ut, out: &mut [f64]| out.fill(0.0));
        let d3f: WaveFn = Arc::new(|_u, _ux, _ut, out: &mut [f64]| {
            out.fill(0.0);
            out[0] = -1.0;
        });
        WaveProblem::new(1, vec![mass], vec![1.0], f, d1f, zero, d3f)
    }

    /// det(A - mu1^2 M) proximity to zero flags the sonic regime.
    pub fn sonic_margin(&self, mu1: f64) -> f64 {
        let m = self.m;
        let mut mat = vec![0.0; m * m];
        for k in 0..m * m {
            mat[k] = self.a[k] - mu1 * mu1 * self.mass[k];
        }
        det_small(m, &mat).abs()
    }
}

fn mat_mul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += a[i * n + k] * b[k * n + j];
            }
            c[i * n + j] = acc;
        }
    }
    c
}

fn det_small(n: usize, a: &[f64]) -> f64 {
    match n {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            // LU-based for larger blocks
            let mut m = a.to_vec();
            let mut det = 1.0;
            for k in 0..n {
                let mut piv = k;
                for i in k + 1..n {
                    if m[i * n + k].abs() > m[piv * n + k].abs() {
                        piv = i;
                    }
                }
                if m[piv * n + k] == 0.0 {
                    return 0.0;
                }
                if piv != k {
                    for j in 0..n {
                        m.swap(k * n + j, piv * n + j);
                    }
                    det = -det;
                }
                det *= m[k * n + k];
                for i in k + 1..n {
                    let f = m[i * n + k] / m[k * n + k];
                    for j in k..n {
                        m[i * n + j] -= f * m[k * n + j];
                    }
                }
            }
            det
        }
    }
}

/// First consistency condition: `mu1^0 = -<v0, vhat_xi> / <u0_xi, vhat_xi>`.
pub fn consistency_mu1(
    u0: &Field,
    v0: &Field,
    template: &TemplateProfile,
) -> Result<f64, FreezeError> {
    let u0_xi = d1_central(u0).map_err(|e| FreezeError::Setup(e.to_string()))?;
    let denom = l2_inner(&u0_xi, &template.vhat_xi).map_err(|e| FreezeError::Setup(e.to_string()))?;
    if denom.abs() < 1e-14 {
        return Err(FreezeError::DegenerateTemplate(format!(
            "<u0_xi, vhat_xi> = {denom:.3e} vanishes"
        )));
    }
    let num = l2_inner(v0, &template.vhat_xi).map_err(|e| FreezeError::Setup(e.to_string()))?;
    Ok(-num / denom)
}

/// Second consistency condition, solved for `mu2^0`:
/// `0 = <(M^-1 A + (mu1^0)^2 I) u0_xixi + 2 mu1^0 v0_xi + M^-1 f(u0, u0_xi, v0), vhat_xi>
///      + mu2^0 <u0_xi, vhat_xi>`.
pub fn consistency_mu2(
    u0: &Field,
    v0: &Field,
    mu1_0: f64,
    problem: &WaveProblem,
    template: &TemplateProfile,
) -> Result<f64, FreezeError> {
    let m = problem.m;
    let u0_xi = d1_central(u0).map_err(|e| FreezeError::Setup(e.to_string()))?;
    let u0_xixi = d2_central(u0).map_err(|e| FreezeError::Setup(e.to_string()))?;
    let v0_xi = d1_central(v0).map_err(|e| FreezeError::Setup(e.to_string()))?;
    let denom = l2_inner(&u0_xi, &template.vhat_xi).map_err(|e| FreezeError::Setup(e.to_string()))?;
    if denom.abs() < 1e-14 {
        return Err(FreezeError::DegenerateTemplate(format!(
            "<u0_xi, vhat_xi> = {denom:.3e} vanishes"
        )));
    }
    let minv_a = mat_mul(m, &problem.mass_inv, &problem.a);
    let n_nodes = u0.node_count();
    let mut accum = Field::zeros(u0.grid.clone(), m);
    let mut fbuf = vec![0.0; m];
    let mut u = vec![0.0; m];
    let mut ux = vec![0.0; m];
    let mut ut = vec![0.0; m];
    for i in 0..n_nodes {
        for c in 0..m {
            u[c] = u0.at(i, c);
            ux[c] = u0_xi.at(i, c);
            ut[c] = v0.at(i, c);
        }
        (problem.f)(&u, &ux, &ut, &mut fbuf);
        for r in 0..m {
            let mut acc = 2.0 * mu1_0 * v0_xi.at(i, r) + mu1_0 * mu1_0 * u0_xixi.at(i, r);
            for c in 0..m {
                acc += minv_a[r * m + c] * u0_xixi.at(i, c) + problem.mass_inv[r * m + c] * fbuf[c];
            }
            *accum.at_mut(i, r) = acc;
        }
    }
    let num = l2_inner(&accum, &template.vhat_xi).map_err(|e| FreezeError::Setup(e.to_string()))?;
    Ok(-num / denom)
}

#[derive(Debug, Clone)]
pub struct WaveFreezeState {
    pub v: Field,
    pub w: Field,
    pub mu1: f64,
    pub mu2: f64,
    pub gamma: f64,
    pub t: f64,
}

#[derive(Debug, Clone)]
pub struct WaveFreezeOptions {
    pub dt: f64,
    pub t_end: f64,
    pub newton_tol: f64,
    pub steady_tol: f64,
    pub max_newton_iters: usize,
    pub snapshot_stride: usize,
}

impl Default for WaveFreezeOptions {
    fn default() -> Self {
        WaveFreezeOptions {
            dt: 0.2,
            t_end: 100.0,
            newton_tol: 1e-10,
            steady_tol: 1e-8,
            max_newton_iters: 25,
            snapshot_stride: 0,
        }
    }
}

#[derive(Debug)]
pub struct WaveFreezeRun {
    pub series: TimeSeries,
    pub final_state: WaveFreezeState,
    pub snapshots: Vec<(f64, Field)>,
    pub steady_reached: bool,
    pub sonic_flag: bool,
}

struct WaveStepper {
    problem: WaveProblem,
    grid: Grid1D,
    weights: Vec<f64>,
}

impl WaveStepper {
    /// Unknown ordering per node: v components then w components.
    fn pack(&self, v: &[f64], w: &[f64]) -> Vec<f64> {
        let m = self.problem.m;
        let n = self.grid.n;
        let mut z = vec![0.0; 2 * m * n];
        for i in 0..n {
            for c in 0..m {
                z[i * 2 * m + c] = v[i * m + c];
                z[i * 2 * m + m + c] = w[i * m + c];
            }
        }
        z
    }

    fn unpack(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.problem.m;
        let n = self.grid.n;
        let mut v = vec![0.0; n * m];
        let mut w = vec![0.0; n * m];
        for i in 0..n {
            for c in 0..m {
                v[i * m + c] = z[i * 2 * m + c];
                w[i * m + c] = z[i * 2 * m + m + c];
            }
        }
        (v, w)
    }

    /// Residual of the companion-form BDF step, phase value, and the current
    /// mu1 implied by the trapezoid update from mu2.
    #[allow(clippy::too_many_arguments)]
    fn residual(
        &self,
        z: &[f64],
        mu2: f64,
        mu1_base: f64,
        mu2_prev: f64,
        dt: f64,
        beta: f64,
        hist: &[f64],
        template: &TemplateProfile,
    ) -> (Vec<f64>, f64, f64) {
        let m = self.problem.m;
        let n = self.grid.n;
        let h = self.grid.h();
        let mu1 = mu1_base + 0.5 * dt * (mu2_prev + mu2);
        let (v, w) = self.unpack(z);
        let mut g = vec![0.0; 2 * m * n];
        let mut fbuf = vec![0.0; m];
        let mut uu = vec![0.0; m];
        let mut ux = vec![0.0; m];
        let mut ut = vec![0.0; m];
        for i in 0..n {
            let im1 = closed_index(n, i, -1, Bc1D::Neumann);
            let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
            for c in 0..m {
                uu[c] = v[i * m + c];
                ux[c] = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
                ut[c] = w[i * m + c] - mu1 * ux[c];
            }
            (self.problem.f)(&uu, &ux, &ut, &mut fbuf);
            for r in 0..m {
                // v-row: beta v - hist_v - w
                g[i * 2 * m + r] = beta * v[i * m + r] - hist[i * 2 * m + r] - w[i * m + r];
                // w-row: M(beta w - hist_w) - [(A - mu1^2 M) v_xx + 2 mu1 M w_x
                //         + mu2 M v_x + f]
                let mut acc = -fbuf[r];
                for c in 0..m {
                    let vxx = (v[ip1 * m + c] - 2.0 * v[i * m + c] + v[im1 * m + c]) / (h * h);
                    let wx = (w[ip1 * m + c] - w[im1 * m + c]) / (2.0 * h);
                    let vx = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
                    acc += self.problem.mass[r * m + c]
                        * (beta * w[i * m + c] - hist[i * 2 * m + m + c])
                        - (self.problem.a[r * m + c] - mu1 * mu1 * self.problem.mass[r * m + c])
                            * vxx
                        - 2.0 * mu1 * self.problem.mass[r * m + c] * wx
                        - mu2 * self.problem.mass[r * m + c] * vx;
                }
                g[i * 2 * m + m + r] = acc;
            }
        }
        // phase row: <vhat_xi, v - vhat>
        let mut psi = 0.0;
        for i in 0..n {
            let wgt = self.weights[i];
            for c in 0..m {
                psi += wgt
                    * template.vhat_xi.values[i * m + c]
                    * (v[i * m + c] - template.vhat.values[i * m + c]);
            }
        }
        (g, psi, mu1)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        &self,
        z: &[f64],
        mu2: f64,
        mu1_base: f64,
        mu2_prev: f64,
        dt: f64,
        beta: f64,
    ) -> (BandedMatrix<f64>, Vec<f64>) {
        let m = self.problem.m;
        let n = self.grid.n;
        let h = self.grid.h();
        let mu1 = mu1_base + 0.5 * dt * (mu2_prev + mu2);
        let (v, w) = self.unpack(z);
        let block = 2 * m;
        let bw = 2 * block - 1;
        let mut jac = BandedMatrix::zeros(n * block, bw, bw);
        let mut col = vec![0.0; n * block];
        let mut d1 = vec![0.0; m * m];
        let mut d2 = vec![0.0; m * m];
        let mut d3 = vec![0.0; m * m];
        let mut uu = vec![0.0; m];
        let mut ux = vec![0.0; m];
        let mut ut = vec![0.0; m];
        for i in 0..n {
            let im1 = closed_index(n, i, -1, Bc1D::Neumann);
            let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
            for c in 0..m {
                uu[c] = v[i * m + c];
                ux[c] = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
                ut[c] = w[i * m + c] - mu1 * ux[c];
            }
            (self.problem.d1f)(&uu, &ux, &ut, &mut d1);
            (self.problem.d2f)(&uu, &ux, &ut, &mut d2);
            (self.problem.d3f)(&uu, &ux, &ut, &mut d3);
            let row_v = |r: usize| i * block + r;
            let row_w = |r: usize| i * block + m + r;
            for r in 0..m {
                // v-row
                jac.add(row_v(r), i * block + r, beta);
                jac.add(row_v(r), i * block + m + r, -1.0);
                // w-row
                for c in 0..m {
                    let mm = self.problem.mass[r * m + c];
                    let stiff = self.problem.a[r * m + c] - mu1 * mu1 * mm;
                    // M beta w
                    jac.add(row_w(r), i * block + m + c, beta * mm);
                    // -(A - mu1^2 M) v_xx
                    jac.add(row_w(r), ip1 * block + c, -stiff / (h * h));
                    jac.add(row_w(r), i * block + c, 2.0 * stiff / (h * h));
                    jac.add(row_w(r), im1 * block + c, -stiff / (h * h));
                    // -2 mu1 M w_x
                    jac.add(row_w(r), ip1 * block + m + c, -mu1 * mm / h);
                    jac.add(row_w(r), im1 * block + m + c, mu1 * mm / h);
                    // -mu2 M v_x
                    jac.add(row_w(r), ip1 * block + c, -mu2 * mm / (2.0 * h));
                    jac.add(row_w(r), im1 * block + c, mu2 * mm / (2.0 * h));
                    // -D1f
                    jac.add(row_w(r), i * block + c, -d1[r * m + c]);
                    // -D2f v_x  and -D3f (w - mu1 v_x) contributions
                    let dx = d2[r * m + c] - mu1 * d3[r * m + c];
                    jac.add(row_w(r), ip1 * block + c, -dx / (2.0 * h));
                    jac.add(row_w(r), im1 * block + c, dx / (2.0 * h));
                    jac.add(row_w(r), i * block + m + c, -d3[r * m + c]);
                }
                // border column: d residual / d mu2, chain through mu1' = dt/2
                let mut acc = 0.0;
                for c in 0..m {
                    let mm = self.problem.mass[r * m + c];
                    let vxx = (v[ip1 * m + c] - 2.0 * v[i * m + c] + v[im1 * m + c]) / (h * h);
                    let wx = (w[ip1 * m + c] - w[im1 * m + c]) / (2.0 * h);
                    let vx = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
                    // d/dmu1 of -(A - mu1^2 M) vxx = +2 mu1 M vxx
                    // d/dmu1 of -2 mu1 M w_x = -2 M w_x
                    // d/dmu1 of -f(.., w - mu1 vx) = +D3f vx
                    acc += 0.5 * dt * (2.0 * mu1 * mm * vxx - 2.0 * mm * wx)
                        - mm * vx;
                    acc += 0.5 * dt * d3[r * m + c] * vx;
                }
                col[row_w(r)] = acc;
            }
        }
        (jac, col)
    }
}

/// Runs the frozen wave equation from `(u0, v0)` with the consistency
/// conditions applied internally.
pub fn wave_freeze_run(
    problem: WaveProblem,
    grid: Grid1D,
    u0: &Field,
    v0: &Field,
    template: &TemplateProfile,
    opts: &WaveFreezeOptions,
) -> Result<WaveFreezeRun, FreezeError> {
    let m = problem.m;
    let mu1_0 = consistency_mu1(u0, v0, template)?;
    let mu2_0 = consistency_mu2(u0, v0, mu1_0, &problem, template)?;
    let u0_xi = d1_central(u0).map_err(|e| FreezeError::Setup(e.to_string()))?;
    // v_t(0) = v0 + mu1^0 u0_xi
    let w0 = v0.axpy(mu1_0, &u0_xi);

    let weights = quadrature_weights(&u0.grid);
    let stepper = WaveStepper {
        problem,
        grid: grid.clone(),
        weights,
    };
    let dt = opts.dt;
    let n_steps = (opts.t_end / dt).round() as usize;
    let block = 2 * m;

    let mut z_prev = stepper.pack(&u0.values, &w0.values);
    let mut z_prev2: Option<Vec<f64>> = None;
    let mut mu1 = mu1_0;
    let mut mu2 = mu2_0;
    let mut gamma = 0.0;
    let mut t = 0.0;
    let mut series = TimeSeries::with_mu_count(2);
    let mut snapshots = Vec::new();
    let mut steady_reached = false;
    let mut sonic_flag = false;

    for step in 1..=n_steps {
        let (beta, hist): (f64, Vec<f64>) = match &z_prev2 {
            None => (1.0 / dt, z_prev.iter().map(|x| x / dt).collect()),
            Some(zp2) => (
                1.5 / dt,
                z_prev
                    .iter()
                    .zip(zp2)
                    .map(|(a, b)| (2.0 * a - 0.5 * b) / dt)
                    .collect(),
            ),
        };
        let mut z: Vec<f64> = match &z_prev2 {
            None => z_prev.clone(),
            Some(zp2) => z_prev.iter().zip(zp2).map(|(a, b)| 2.0 * a - b).collect(),
        };
        let mu1_base = mu1;
        let mu2_prev = mu2;
        let mut mu2_new = mu2;
        let mut iters_used = None;
        let trace = std::env::var_os("FREEZEWAVE_NEWTON_TRACE").is_some();
        for iter in 0..opts.max_newton_iters {
            let (g, psi, _) = stepper.residual(
                &z, mu2_new, mu1_base, mu2_prev, dt, beta, &hist, template,
            );
            let res = g.iter().fold(psi.abs(), |acc, x| acc.max(x.abs()));
            if trace {
                eprintln!("newton step={step} iter={iter} res={res:.3e} psi={psi:.3e} mu2={mu2_new:.6e}");
            }
            if res <= opts.newton_tol {
                iters_used = Some(iter);
                break;
            }
            let (jac, col) = stepper.assemble(&z, mu2_new, mu1_base, mu2_prev, dt, beta);
            // fixed-phase row over the v-components
            let mut row = vec![0.0; z.len()];
            for i in 0..grid.n {
                for c in 0..m {
                    row[i * block + c] = stepper.weights[i] * template.vhat_xi.values[i * m + c];
                }
            }
            let lu = jac
                .factor()
                .map_err(|e| FreezeError::LinearSolve(e.to_string()))?;
            let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
            let x1 = lu.solve(&neg_g);
            let x2 = lu.solve(&col);
            let row_x1: f64 = row.iter().zip(&x1).map(|(a, b)| a * b).sum();
            let row_x2: f64 = row.iter().zip(&x2).map(|(a, b)| a * b).sum();
            let denom = -row_x2;
            if denom.abs() < 1e-300 {
                return Err(FreezeError::LinearSolve(
                    "bordered elimination broke down in the wave solver".into(),
                ));
            }
            let row_norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            let x2_norm = x2.iter().map(|x| x * x).sum::<f64>().sqrt();
            if denom.abs() <= 1e-12 * row_norm * x2_norm + 1e-300 {
                return Err(FreezeError::DegenerateTemplate(format!(
                    "phase pairing degenerate at t = {t:.3} (denominator {denom:.3e})"
                )));
            }
            let dmu2 = (-psi - row_x1) / denom;
            if trace {
                eprintln!("  denom={denom:.3e} row_x1={row_x1:.3e} dmu2={dmu2:.3e}");
            }
            for k in 0..z.len() {
                z[k] += x1[k] - x2[k] * dmu2;
            }
            mu2_new += dmu2;
        }
        let iters = iters_used.ok_or_else(|| {
            let (g, psi, _) = stepper.residual(
                &z, mu2_new, mu1_base, mu2_prev, dt, beta, &hist, template,
            );
            FreezeError::NewtonDiverged {
                iters: opts.max_newton_iters,
                residual: g.iter().fold(psi.abs(), |acc, x| acc.max(x.abs())),
            }
        })?;
        let mu1_new = mu1_base + 0.5 * dt * (mu2_prev + mu2_new);
        if stepper.problem.sonic_margin(mu1_new) < 1e-6 {
            sonic_flag = true;
        }
        t += dt;
        gamma += 0.5 * dt * (mu1 + mu1_new);
        let change = z
            .iter()
            .zip(&z_prev)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let (v_new, _) = stepper.unpack(&z);
        let (_, psi, _) = stepper.residual(&z, mu2_new, mu1_base, mu2_prev, dt, beta, &hist, template);
        series
            .push(TsRow {
                t,
                mu: vec![mu1_new, mu2_new],
                residual: psi,
                newton_iters: iters,
                profile_change: Some(change),
            })
            .map_err(|e| FreezeError::Setup(e.to_string()))?;
        if opts.snapshot_stride > 0 && step % opts.snapshot_stride == 0 {
            snapshots.push((
                t,
                Field::new(u0.grid.clone(), m, v_new.clone())
                    .map_err(|e| FreezeError::Setup(e.to_string()))?,
            ));
        }
        let mu_change = (mu1_new - mu1).abs();
        z_prev2 = Some(std::mem::replace(&mut z_prev, z));
        mu1 = mu1_new;
        mu2 = mu2_new;
        if change / dt <= opts.steady_tol && mu_change / dt <= opts.steady_tol {
            steady_reached = true;
            break;
        }
    }

    let (v_fin, w_fin) = stepper.unpack(&z_prev);
    let final_state = WaveFreezeState {
        v: Field::new(u0.grid.clone(), m, v_fin).map_err(|e| FreezeError::Setup(e.to_string()))?,
        w: Field::new(u0.grid.clone(), m, w_fin).map_err(|e| FreezeError::Setup(e.to_string()))?,
        mu1,
        mu2,
        gamma,
        t,
    };
    Ok(WaveFreezeRun {
        series,
        final_state,
        snapshots,
        steady_reached,
        sonic_flag,
    })
}

/// Direct BDF2/Newton simulation of the unfrozen wave equation in companion
/// form (both frame variables pinned to zero, no phase row). Used as the
/// conservation oracle for the time integrator.
pub fn wave_direct_simulate(
    problem: WaveProblem,
    grid: Grid1D,
    u0: &Field,
    v0: &Field,
    dt: f64,
    t_end: f64,
    newton_tol: f64,
) -> Result<(Field, Field), FreezeError> {
    let m = problem.m;
    let weights = quadrature_weights(&u0.grid);
    let dummy_template = TemplateProfile {
        vhat: u0.clone(),
        vhat_xi: d1_central(u0).map_err(|e| FreezeError::Setup(e.to_string()))?,
    };
    let stepper = WaveStepper {
        problem,
        grid: grid.clone(),
        weights,
    };
    let n_steps = (t_end / dt).round() as usize;
    let mut z_prev = stepper.pack(&u0.values, &v0.values);
    let mut z_prev2: Option<Vec<f64>> = None;
    for _ in 1..=n_steps {
        let (beta, hist): (f64, Vec<f64>) = match &z_prev2 {
            None => (1.0 / dt, z_prev.iter().map(|x| x / dt).collect()),
            Some(zp2) => (
                1.5 / dt,
                z_prev
                    .iter()
                    .zip(zp2)
                    .map(|(a, b)| (2.0 * a - 0.5 * b) / dt)
                    .collect(),
            ),
        };
        let mut z: Vec<f64> = match &z_prev2 {
            None => z_prev.clone(),
            Some(zp2) => z_prev.iter().zip(zp2).map(|(a, b)| 2.0 * a - b).collect(),
        };
        let mut converged = false;
        for _ in 0..25 {
            let (g, _, _) =
                stepper.residual(&z, 0.0, 0.0, 0.0, dt, beta, &hist, &dummy_template);
            let res = g.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if res <= newton_tol {
                converged = true;
                break;
            }
            let (jac, _) = stepper.assemble(&z, 0.0, 0.0, 0.0, dt, beta);
            let lu = jac
                .factor()
                .map_err(|e| FreezeError::LinearSolve(e.to_string()))?;
            let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
            let dz = lu.solve(&neg_g);
            for k in 0..z.len() {
                z[k] += dz[k];
            }
        }
        if !converged {
            let (g, _, _) =
                stepper.residual(&z, 0.0, 0.0, 0.0, dt, beta, &hist, &dummy_template);
            return Err(FreezeError::NewtonDiverged {
                iters: 25,
                residual: g.iter().fold(0.0f64, |acc, x| acc.max(x.abs())),
            });
        }
        z_prev2 = Some(std::mem::replace(&mut z_prev, z));
    }
    let (v, w) = stepper.unpack(&z_prev);
    Ok((
        Field::new(u0.grid.clone(), m, v).map_err(|e| FreezeError::Setup(e.to_string()))?,
        Field::new(u0.grid.clone(), m, w).map_err(|e| FreezeError::Setup(e.to_string()))?,
    ))
}

/// First-order reduction of the wave equation to a 3m-dimensional hyperbolic
/// system with E = blockdiag(N, N, -N): U1 = u, U2 = u_t + N u_x,
/// U3 = u_t - N u_x + c u.
pub fn first_order_reduction(problem: &WaveProblem, c: f64) -> Result<Problem1D, FreezeError> {
    let m = problem.m;
    let m3 = 3 * m;
    let mut e = vec![0.0; m3 * m3];
    for i in 0..m {
        for j in 0..m {
            e[i * m3 + j] = problem.n_sqrt[i * m + j];
            e[(m + i) * m3 + (m + j)] = problem.n_sqrt[i * m + j];
            e[(2 * m + i) * m3 + (2 * m + j)] = -problem.n_sqrt[i * m + j];
        }
    }
    let p = problem.clone();
    let cc = c;
    let eval_parts = move |u: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        // reconstruct (u, u_x, u_t) from U
        let m = p.m;
        let u1 = &u[0..m];
        let u2 = &u[m..2 * m];
        let u3 = &u[2 * m..3 * m];
        let mut ut = vec![0.0; m];
        let mut uxn = vec![0.0; m]; // N u_x = (U2 - U3 + c U1)/2
        for i in 0..m {
            ut[i] = 0.5 * (u2[i] + u3[i] - cc * u1[i]);
            uxn[i] = 0.5 * (u2[i] - u3[i] + cc * u1[i]);
        }
        let mut ux = vec![0.0; m];
        for i in 0..m {
            for k in 0..m {
                ux[i] += p.n_sqrt_inv[i * m + k] * uxn[k];
            }
        }
        (u1.to_vec(), ux, ut)
    };
    let p_f = problem.clone();
    let parts_f = eval_parts.clone();
    let f: crate::problem::PointFn = Arc::new(move |u: &[f64], _ux: &[f64], out: &mut [f64]| {
        let m = p_f.m;
        let (u1, ux, ut) = parts_f(u);
        let mut ftilde = vec![0.0; m];
        (p_f.f)(&u1, &ux, &ut, &mut ftilde);
        let mut g = vec![0.0; m];
        for i in 0..m {
            for k in 0..m {
                g[i] += p_f.mass_inv[i * m + k] * ftilde[k];
            }
        }
        for i in 0..m {
            out[i] = -cc * u[i] + u[2 * m + i];
            out[m + i] = g[i];
            out[2 * m + i] = g[i] + cc * u[m + i];
        }
    });
    let p_d = problem.clone();
    let parts_d = eval_parts;
    let d1f: crate::problem::PointFn = Arc::new(move |u: &[f64], _ux: &[f64], out: &mut [f64]| {
        let m = p_d.m;
        let m3 = 3 * m;
        let (u1, ux, ut) = parts_d(u);
        let mut d1 = vec![0.0; m * m];
        let mut d2 = vec![0.0; m * m];
        let mut d3 = vec![0.0; m * m];
        (p_d.d1f)(&u1, &ux, &ut, &mut d1);
        (p_d.d2f)(&u1, &ux, &ut, &mut d2);
        (p_d.d3f)(&u1, &ux, &ut, &mut d3);
        // dg/dU1 = M^-1 [D1 + D2 (c/2) N^-1 - D3 (c/2)]
        // dg/dU2 = M^-1 [D2 (1/2) N^-1 + D3 (1/2)]
        // dg/dU3 = M^-1 [-D2 (1/2) N^-1 + D3 (1/2)]
        let mut d2_ninv = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for k in 0..m {
                    acc += d2[i * m + k] * p_d.n_sqrt_inv[k * m + j];
                }
                d2_ninv[i * m + j] = acc;
            }
        }
        let apply_minv = |mat: &mut [f64]| {
            let tmp = mat.to_vec();
            for i in 0..m {
                for j in 0..m {
                    let mut acc = 0.0;
                    for k in 0..m {
                        acc += p_d.mass_inv[i * m + k] * tmp[k * m + j];
                    }
                    mat[i * m + j] = acc;
                }
            }
        };
        let mut dg1 = vec![0.0; m * m];
        let mut dg2 = vec![0.0; m * m];
        let mut dg3 = vec![0.0; m * m];
        for k in 0..m * m {
            dg1[k] = d1[k] + 0.5 * cc * d2_ninv[k] - 0.5 * cc * d3[k];
            dg2[k] = 0.5 * d2_ninv[k] + 0.5 * d3[k];
            dg3[k] = -0.5 * d2_ninv[k] + 0.5 * d3[k];
        }
        apply_minv(&mut dg1);
        apply_minv(&mut dg2);
        apply_minv(&mut dg3);
        out[..m3 * m3].fill(0.0);
        for i in 0..m {
            // row block 1: -c U1 + U3
            out[i * m3 + i] = -cc;
            out[i * m3 + 2 * m + i] = 1.0;
            for j in 0..m {
                out[(m + i) * m3 + j] = dg1[i * m + j];
                out[(m + i) * m3 + m + j] = dg2[i * m + j];
                out[(m + i) * m3 + 2 * m + j] = dg3[i * m + j];
                out[(2 * m + i) * m3 + j] = dg1[i * m + j];
                out[(2 * m + i) * m3 + m + j] = dg2[i * m + j];
                out[(2 * m + i) * m3 + 2 * m + j] = dg3[i * m + j];
            }
            out[(2 * m + i) * m3 + m + i] += cc;
        }
    });
    Problem1D::hyperbolic(m3, e, f, d1f)
}

/// Initial data of the reduced system from wave initial data `(u0, v0 = u_t)`.
pub fn reduced_initial_data(
    problem: &WaveProblem,
    c: f64,
    u0: &Field,
    v0: &Field,
) -> Result<Field, FreezeError> {
    let m = problem.m;
    let u0_xi = d1_central(u0).map_err(|e| FreezeError::Setup(e.to_string()))?;
    let n = u0.node_count();
    let mut vals = vec![0.0; n * 3 * m];
    for i in 0..n {
        for r in 0..m {
            let mut nux = 0.0;
            for k in 0..m {
                nux += problem.n_sqrt[r * m + k] * u0_xi.at(i, k);
            }
            vals[i * 3 * m + r] = u0.at(i, r);
            vals[i * 3 * m + m + r] = v0.at(i, r) + nux;
            vals[i * 3 * m + 2 * m + r] = v0.at(i, r) - nux + c * u0.at(i, r);
        }
    }
    Field::new(u0.grid.clone(), 3 * m, vals).map_err(|e| FreezeError::Setup(e.to_string()))
}
