//! Freezing PDAE solver for 1D systems: BDF2 time stepping, Newton with a
//! bordered banded Jacobian, fixed or orthogonal phase condition, plus a
//! direct simulator of the unfrozen PDE used for recombination checks.

use freezewave_core::config::PhaseCondition;
use freezewave_core::inner::quadrature_weights;
use freezewave_core::timeseries::TsRow;
use freezewave_core::{Field, Grid1D, TimeSeries};
use freezewave_discretize::{closed_index, d1_central, BandedMatrix, Bc1D};

use crate::problem::{Kind1D, Problem1D};
use crate::FreezeError;

/// Template profile with its precomputed derivative.
#[derive(Debug, Clone)]
pub struct TemplateProfile {
    pub vhat: Field,
    pub vhat_xi: Field,
}

impl TemplateProfile {
    pub fn new(vhat: Field) -> Result<Self, FreezeError> {
        let vhat_xi = d1_central(&vhat).map_err(|e| FreezeError::Setup(e.to_string()))?;
        if freezewave_core::l2_norm(&vhat_xi) <= 0.0 {
            return Err(FreezeError::Setup(
                "template derivative vanishes; degenerate template".into(),
            ));
        }
        Ok(TemplateProfile { vhat, vhat_xi })
    }
}

#[derive(Debug, Clone)]
pub struct FreezeState1D {
    pub v: Field,
    pub mu: f64,
    pub gamma: f64,
    pub t: f64,
}

#[derive(Debug, Clone)]
pub struct Freeze1DOptions {
    pub dt: f64,
    pub t_end: f64,
    pub newton_tol: f64,
    pub steady_tol: f64,
    pub max_newton_iters: usize,
    pub phase: PhaseCondition,
    pub mu0: f64,
    /// Store a profile snapshot every this many steps (0 = none).
    pub snapshot_stride: usize,
}

impl Default for Freeze1DOptions {
    fn default() -> Self {
        Freeze1DOptions {
            dt: 0.1,
            t_end: 10.0,
            newton_tol: 1e-10,
            steady_tol: 1e-8,
            max_newton_iters: 25,
            phase: PhaseCondition::Fixed,
            mu0: 0.0,
            snapshot_stride: 0,
        }
    }
}

#[derive(Debug)]
pub struct Freeze1DRun {
    pub series: TimeSeries,
    pub final_state: FreezeState1D,
    pub snapshots: Vec<(f64, Field)>,
    pub steady_reached: bool,
    pub cfl_warning: bool,
}

/// Shared spatial machinery for one problem on one grid.
pub struct Stepper1D {
    pub problem: Problem1D,
    pub grid: Grid1D,
    weights: Vec<f64>,
    pub cfl_warning: std::cell::Cell<bool>,
}

impl Stepper1D {
    pub fn new(problem: Problem1D, grid: Grid1D) -> Self {
        let weights = quadrature_weights(&freezewave_core::Grid::One(grid.clone()));
        Stepper1D {
            problem,
            grid,
            weights,
            cfl_warning: std::cell::Cell::new(false),
        }
    }

    fn n(&self) -> usize {
        self.grid.n
    }

    fn m(&self) -> usize {
        self.problem.m
    }

    /// Characteristic-wise positive/negative split of E + mu I for upwinding.
    fn transport_split(&self, mu: f64) -> Option<(Vec<f64>, Vec<f64>, f64)> {
        match &self.problem.kind {
            Kind1D::Parabolic => None,
            Kind1D::Hyperbolic(ch) => {
                let m = self.m();
                let mut p_pos = vec![0.0; m * m];
                let mut p_neg = vec![0.0; m * m];
                let mut max_speed = 0.0f64;
                for i in 0..m {
                    for j in 0..m {
                        let mut pos = 0.0;
                        let mut neg = 0.0;
                        for k in 0..m {
                            let lam = ch.lambdas[k] + mu;
                            let w = ch.t[i * m + k] * ch.t_inv[k * m + j];
                            if lam > 0.0 {
                                pos += w * lam;
                            } else {
                                neg += w * lam;
                            }
                        }
                        p_pos[i * m + j] = pos;
                        p_neg[i * m + j] = neg;
                    }
                }
                for k in 0..m {
                    max_speed = max_speed.max((ch.lambdas[k] + mu).abs());
                }
                Some((p_pos, p_neg, max_speed))
            }
        }
    }

    /// Upwind directions per characteristic field: +1 for forward difference,
    /// -1 for backward (inspectable stencil trace).
    pub fn upwind_signs(&self, mu: f64) -> Vec<i8> {
        match &self.problem.kind {
            Kind1D::Parabolic => Vec::new(),
            Kind1D::Hyperbolic(ch) => ch
                .lambdas
                .iter()
                .map(|l| if l + mu > 0.0 { 1 } else { -1 })
                .collect(),
        }
    }

    /// Spatial right-hand side R(v, mu): `A v_xx + mu v_x + f(v, v_x)` for
    /// parabolic problems, `(E + mu I) v_x + f(v)` characteristic-upwinded
    /// for hyperbolic ones. Neumann closure by mirror ghosts.
    pub fn spatial_rhs(&self, v: &[f64], mu: f64) -> Vec<f64> {
        let (n, m) = (self.n(), self.m());
        let h = self.grid.h();
        let mut out = vec![0.0; n * m];
        let mut fbuf = vec![0.0; m];
        let mut u = vec![0.0; m];
        let mut ux = vec![0.0; m];
        let split = self.transport_split(mu);
        for i in 0..n {
            let im1 = closed_index(n, i, -1, Bc1D::Neumann);
            let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
            for c in 0..m {
                u[c] = v[i * m + c];
                ux[c] = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
            }
            match &split {
                None => {
                    // diffusion + advection + reaction
                    (self.problem.f)(&u, &ux, &mut fbuf);
                    for r in 0..m {
                        let mut acc = fbuf[r] + mu * ux[r];
                        for c in 0..m {
                            let vxx =
                                (v[ip1 * m + c] - 2.0 * v[i * m + c] + v[im1 * m + c]) / (h * h);
                            acc += self.problem.a[r * m + c] * vxx;
                        }
                        out[i * m + r] = acc;
                    }
                }
                Some((p_pos, p_neg, _)) => {
                    (self.problem.f)(&u, &ux, &mut fbuf);
                    for r in 0..m {
                        let mut acc = fbuf[r];
                        for c in 0..m {
                            let fwd = (v[ip1 * m + c] - v[i * m + c]) / h;
                            let bwd = (v[i * m + c] - v[im1 * m + c]) / h;
                            acc += p_pos[r * m + c] * fwd + p_neg[r * m + c] * bwd;
                        }
                        out[i * m + r] = acc;
                    }
                }
            }
        }
        out
    }

    /// Bandwidth of the spatial Jacobian in interleaved component ordering.
    fn bandwidth(&self) -> usize {
        2 * self.m() - 1 + self.m()
    }

    /// Jacobian of `beta v - R(v, mu)` with respect to v, as a banded matrix.
    fn assemble_jacobian(&self, v: &[f64], mu: f64, beta: f64) -> BandedMatrix<f64> {
        let (n, m) = (self.n(), self.m());
        let h = self.grid.h();
        let bw = self.bandwidth();
        let mut jac = BandedMatrix::zeros(n * m, bw, bw);
        let mut d1 = vec![0.0; m * m];
        let mut d2 = vec![0.0; m * m];
        let mut u = vec![0.0; m];
        let mut ux = vec![0.0; m];
        let split = self.transport_split(mu);
        for i in 0..n {
            let im1 = closed_index(n, i, -1, Bc1D::Neumann);
            let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
            for c in 0..m {
                u[c] = v[i * m + c];
                ux[c] = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
            }
            (self.problem.d1f)(&u, &ux, &mut d1);
            for r in 0..m {
                jac.add(i * m + r, i * m + r, beta);
                for c in 0..m {
                    jac.add(i * m + r, i * m + c, -d1[r * m + c]);
                }
            }
            match &split {
                None => {
                    (self.problem.d2f)(&u, &ux, &mut d2);
                    for r in 0..m {
                        for c in 0..m {
                            let a = self.problem.a[r * m + c];
                            // diffusion stencil
                            jac.add(i * m + r, ip1 * m + c, -a / (h * h));
                            jac.add(i * m + r, i * m + c, 2.0 * a / (h * h));
                            jac.add(i * m + r, im1 * m + c, -a / (h * h));
                            // advection mu * v_x (diagonal in components)
                            // and D2f * v_x coupling, both central
                            let adv = d2[r * m + c] + if r == c { mu } else { 0.0 };
                            jac.add(i * m + r, ip1 * m + c, -adv / (2.0 * h));
                            jac.add(i * m + r, im1 * m + c, adv / (2.0 * h));
                        }
                    }
                }
                Some((p_pos, p_neg, _)) => {
                    for r in 0..m {
                        for c in 0..m {
                            let pp = p_pos[r * m + c];
                            let pn = p_neg[r * m + c];
                            jac.add(i * m + r, ip1 * m + c, -pp / h);
                            jac.add(i * m + r, i * m + c, pp / h);
                            jac.add(i * m + r, i * m + c, -pn / h);
                            jac.add(i * m + r, im1 * m + c, pn / h);
                        }
                    }
                }
            }
        }
        jac
    }

    /// d R / d mu at fixed v: `v_x` (parabolic) or the characteristic
    /// indicator split of v_x (hyperbolic away from sonic points).
    fn rhs_mu_derivative(&self, v: &[f64], mu: f64) -> Vec<f64> {
        let (n, m) = (self.n(), self.m());
        let h = self.grid.h();
        let mut out = vec![0.0; n * m];
        match &self.problem.kind {
            Kind1D::Parabolic => {
                for i in 0..n {
                    let im1 = closed_index(n, i, -1, Bc1D::Neumann);
                    let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
                    for c in 0..m {
                        out[i * m + c] = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
                    }
                }
            }
            Kind1D::Hyperbolic(ch) => {
                // d/dmu [P+(mu) D+ v + P-(mu) D- v] = T diag(1_{lam+mu>0}) T^-1 D+ v
                //                                   + T diag(1_{lam+mu<=0}) T^-1 D- v
                for i in 0..n {
                    let im1 = closed_index(n, i, -1, Bc1D::Neumann);
                    let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
                    for r in 0..m {
                        let mut acc = 0.0;
                        for c in 0..m {
                            let fwd = (v[ip1 * m + c] - v[i * m + c]) / h;
                            let bwd = (v[i * m + c] - v[im1 * m + c]) / h;
                            for k in 0..m {
                                let w = ch.t[r * m + k] * ch.t_inv[k * m + c];
                                if ch.lambdas[k] + mu > 0.0 {
                                    acc += w * fwd;
                                } else {
                                    acc += w * bwd;
                                }
                            }
                        }
                        out[i * m + r] = acc;
                    }
                }
            }
        }
        out
    }

    /// Weighted inner product of two flat component vectors.
    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let m = self.m();
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            let mut dot = 0.0;
            for c in 0..m {
                dot += a[i * m + c] * b[i * m + c];
            }
            acc += w * dot;
        }
        acc
    }

    /// Phase constraint value at (v, mu).
    pub fn phase_value(
        &self,
        v: &[f64],
        mu: f64,
        template: &TemplateProfile,
        phase: PhaseCondition,
    ) -> f64 {
        match phase {
            PhaseCondition::Fixed => {
                let diff: Vec<f64> = v
                    .iter()
                    .zip(&template.vhat.values)
                    .map(|(a, b)| a - b)
                    .collect();
                self.inner(&template.vhat_xi.values, &diff)
            }
            PhaseCondition::Orthogonal => {
                let rhs = self.spatial_rhs(v, mu);
                let vx = self.d1(v);
                self.inner(&vx, &rhs)
            }
        }
    }

    fn d1(&self, v: &[f64]) -> Vec<f64> {
        let (n, m) = (self.n(), self.m());
        let h = self.grid.h();
        let mut out = vec![0.0; n * m];
        for i in 0..n {
            let im1 = closed_index(n, i, -1, Bc1D::Neumann);
            let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
            for c in 0..m {
                out[i * m + c] = (v[ip1 * m + c] - v[im1 * m + c]) / (2.0 * h);
            }
        }
        out
    }

    /// Full PDAE residual at the candidate state: the BDF-discrete evolution
    /// rows and the scalar phase row. `hist` carries `beta` and the history
    /// combination so that the rows read `beta v - hist - R(v, mu)`.
    pub fn pdae_residual(
        &self,
        v: &[f64],
        mu: f64,
        beta: f64,
        hist: &[f64],
        template: &TemplateProfile,
        phase: PhaseCondition,
    ) -> (Vec<f64>, f64) {
        let rhs = self.spatial_rhs(v, mu);
        let g: Vec<f64> = v
            .iter()
            .zip(hist)
            .zip(&rhs)
            .map(|((vi, hi), ri)| beta * vi - hi - ri)
            .collect();
        let psi = self.phase_value(v, mu, template, phase);
        (g, psi)
    }

    /// One implicit solve of the bordered system. `beta` and `hist` encode
    /// the time discretization (`beta = 0`, `hist = 0` gives the steady
    /// problem). Returns the accepted (v, mu) and Newton iteration count.
    #[allow(clippy::too_many_arguments)]
    pub fn newton_bordered(
        &self,
        v0: &[f64],
        mu0: f64,
        beta: f64,
        hist: &[f64],
        template: &TemplateProfile,
        phase: PhaseCondition,
        newton_tol: f64,
        max_iters: usize,
    ) -> Result<(Vec<f64>, f64, usize), FreezeError> {
        let mut v = v0.to_vec();
        let mut mu = mu0;
        for iter in 0..max_iters {
            let (g, psi) = self.pdae_residual(&v, mu, beta, hist, template, phase);
            let res = g.iter().fold(psi.abs(), |acc, x| acc.max(x.abs()));
            if res <= newton_tol {
                return Ok((v, mu, iter));
            }
            let jac = self.assemble_jacobian(&v, mu, beta);
            // border column: dG/dmu = -dR/dmu
            let col: Vec<f64> = self.rhs_mu_derivative(&v, mu).iter().map(|x| -x).collect();
            // phase row and corner
            let (row, corner) = match phase {
                PhaseCondition::Fixed => {
                    let m = self.m();
                    let mut row = vec![0.0; v.len()];
                    for (i, w) in self.weights.iter().enumerate() {
                        for c in 0..m {
                            row[i * m + c] = w * template.vhat_xi.values[i * m + c];
                        }
                    }
                    (row, 0.0)
                }
                PhaseCondition::Orthogonal => {
                    // psi = <v_x, R(v, mu)>_w:
                    // dpsi/dv = D1^T (w R) + (dR/dv)^T (w v_x),
                    // with dR/dv = beta I - jac.
                    let m = self.m();
                    let rhs = self.spatial_rhs(&v, mu);
                    let vx = self.d1(&v);
                    let wr: Vec<f64> = rhs
                        .iter()
                        .enumerate()
                        .map(|(k, r)| self.weights[k / m] * r)
                        .collect();
                    let wvx: Vec<f64> = vx
                        .iter()
                        .enumerate()
                        .map(|(k, x)| self.weights[k / m] * x)
                        .collect();
                    let d1t_wr = self.d1_transpose(&wr);
                    let jac_t_wvx = jac.matvec_transpose(&wvx);
                    let mut row = vec![0.0; v.len()];
                    for k in 0..row.len() {
                        row[k] = d1t_wr[k] + beta * wvx[k] - jac_t_wvx[k];
                    }
                    let dmu = self.rhs_mu_derivative(&v, mu);
                    (row, self.inner(&vx, &dmu))
                }
            };
            let lu = jac
                .factor()
                .map_err(|e| FreezeError::LinearSolve(e.to_string()))?;
            let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
            let x1 = lu.solve(&neg_g);
            let x2 = lu.solve(&col);
            let row_x1: f64 = row.iter().zip(&x1).map(|(a, b)| a * b).sum();
            let row_x2: f64 = row.iter().zip(&x2).map(|(a, b)| a * b).sum();
            let denom = corner - row_x2;
            if denom.abs() < 1e-300 {
                return Err(FreezeError::LinearSolve(
                    "bordered elimination broke down (degenerate phase pairing)".into(),
                ));
            }
            let dmu = (-psi - row_x1) / denom;
            for k in 0..v.len() {
                v[k] += x1[k] - x2[k] * dmu;
            }
            mu += dmu;
        }
        Err(FreezeError::NewtonDiverged {
            iters: max_iters,
            residual: {
                let (g, psi) = self.pdae_residual(&v, mu, beta, hist, template, phase);
                g.iter().fold(psi.abs(), |acc, x| acc.max(x.abs()))
            },
        })
    }

    fn d1_transpose(&self, y: &[f64]) -> Vec<f64> {
        // transpose of the mirror-closed central difference
        let (n, m) = (self.n(), self.m());
        let h = self.grid.h();
        let mut out = vec![0.0; n * m];
        for i in 0..n {
            let im1 = closed_index(n, i, -1, Bc1D::Neumann);
            let ip1 = closed_index(n, i, 1, Bc1D::Neumann);
            for c in 0..m {
                out[ip1 * m + c] += y[i * m + c] / (2.0 * h);
                out[im1 * m + c] -= y[i * m + c] / (2.0 * h);
            }
        }
        out
    }

    /// Plain implicit solve without border (direct simulation, mu frozen).
    pub fn newton_plain(
        &self,
        v0: &[f64],
        mu: f64,
        beta: f64,
        hist: &[f64],
        newton_tol: f64,
        max_iters: usize,
    ) -> Result<(Vec<f64>, usize), FreezeError> {
        let mut v = v0.to_vec();
        for iter in 0..max_iters {
            let rhs = self.spatial_rhs(&v, mu);
            let g: Vec<f64> = v
                .iter()
                .zip(hist)
                .zip(&rhs)
                .map(|((vi, hi), ri)| beta * vi - hi - ri)
                .collect();
            let res = g.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if res <= newton_tol {
                return Ok((v, iter));
            }
            let jac = self.assemble_jacobian(&v, mu, beta);
            let lu = jac
                .factor()
                .map_err(|e| FreezeError::LinearSolve(e.to_string()))?;
            let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
            let dv = lu.solve(&neg_g);
            for k in 0..v.len() {
                v[k] += dv[k];
            }
        }
        Err(FreezeError::NewtonDiverged {
            iters: max_iters,
            residual: f64::NAN,
        })
    }

    fn check_cfl(&self, mu: f64, dt: f64) {
        if let Some((_, _, max_speed)) = self.transport_split(mu) {
            if max_speed * dt / self.grid.h() > 1.0 {
                self.cfl_warning.set(true);
            }
        }
    }
}

/// Runs the freezing PDAE from `u0` until `t_end` or steady state.
pub fn run_freeze(
    problem: Problem1D,
    grid: Grid1D,
    u0: &Field,
    template: &TemplateProfile,
    opts: &Freeze1DOptions,
) -> Result<Freeze1DRun, FreezeError> {
    let stepper = Stepper1D::new(problem, grid);
    let n_unknowns = u0.values.len();
    let dt = opts.dt;
    let n_steps = (opts.t_end / dt).round() as usize;

    let mut v_prev = u0.values.clone();
    let mut v_prev2: Option<Vec<f64>> = None;
    let mut mu = opts.mu0;
    let mut gamma = 0.0;
    let mut t = 0.0;
    let mut series = TimeSeries::with_mu_count(1);
    let mut snapshots = Vec::new();
    let mut steady_reached = false;

    for step in 1..=n_steps {
        stepper.check_cfl(mu, dt);
        let (beta, hist): (f64, Vec<f64>) = match &v_prev2 {
            None => (1.0 / dt, v_prev.iter().map(|x| x / dt).collect()),
            Some(vp2) => (
                1.5 / dt,
                v_prev
                    .iter()
                    .zip(vp2)
                    .map(|(a, b)| (2.0 * a - 0.5 * b) / dt)
                    .collect(),
            ),
        };
        // predictor: linear extrapolation once two levels exist
        let guess: Vec<f64> = match &v_prev2 {
            None => v_prev.clone(),
            Some(vp2) => v_prev
                .iter()
                .zip(vp2)
                .map(|(a, b)| 2.0 * a - b)
                .collect(),
        };
        let (v_new, mu_new, iters) = stepper
            .newton_bordered(
                &guess,
                mu,
                beta,
                &hist,
                template,
                opts.phase,
                opts.newton_tol,
                opts.max_newton_iters,
            )
            .map_err(|e| {
                if std::env::var_os("FREEZEWAVE_NEWTON_TRACE").is_some() {
                    eprintln!("step {step} failed at t={t}, mu={mu}: {e}");
                }
                e
            })?;
        let t_new = t + dt;
        gamma += 0.5 * dt * (mu + mu_new);
        let change = v_new
            .iter()
            .zip(&v_prev)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let psi = stepper.phase_value(&v_new, mu_new, template, opts.phase);
        series
            .push(TsRow {
                t: t_new,
                mu: vec![mu_new],
                residual: psi,
                newton_iters: iters,
                profile_change: Some(change),
            })
            .map_err(|e| FreezeError::Setup(e.to_string()))?;
        if opts.snapshot_stride > 0 && step % opts.snapshot_stride == 0 {
            snapshots.push((
                t_new,
                Field::new(u0.grid.clone(), u0.m, v_new.clone())
                    .map_err(|e| FreezeError::Setup(e.to_string()))?,
            ));
        }
        let mu_change = (mu_new - mu).abs();
        v_prev2 = Some(std::mem::replace(&mut v_prev, v_new));
        mu = mu_new;
        t = t_new;
        if change / dt <= opts.steady_tol && mu_change / dt <= opts.steady_tol {
            steady_reached = true;
            break;
        }
    }
    debug_assert_eq!(v_prev.len(), n_unknowns);
    let final_state = FreezeState1D {
        v: Field::new(u0.grid.clone(), u0.m, v_prev).map_err(|e| FreezeError::Setup(e.to_string()))?,
        mu,
        gamma,
        t,
    };
    Ok(Freeze1DRun {
        series,
        final_state,
        snapshots,
        steady_reached,
        cfl_warning: stepper.cfl_warning.get(),
    })
}

/// Direct BDF2/Newton simulation of the unfrozen PDE (mu pinned to the given
/// value, no phase row). Returns sampled states every `stride` steps plus the
/// final one.
pub fn direct_simulate(
    problem: Problem1D,
    grid: Grid1D,
    u0: &Field,
    dt: f64,
    t_end: f64,
    newton_tol: f64,
    stride: usize,
) -> Result<Vec<(f64, Field)>, FreezeError> {
    let stepper = Stepper1D::new(problem, grid);
    let n_steps = (t_end / dt).round() as usize;
    let mut v_prev = u0.values.clone();
    let mut v_prev2: Option<Vec<f64>> = None;
    let mut t = 0.0;
    let mut out = vec![(0.0, u0.clone())];
    for step in 1..=n_steps {
        let (beta, hist): (f64, Vec<f64>) = match &v_prev2 {
            None => (1.0 / dt, v_prev.iter().map(|x| x / dt).collect()),
            Some(vp2) => (
                1.5 / dt,
                v_prev
                    .iter()
                    .zip(vp2)
                    .map(|(a, b)| (2.0 * a - 0.5 * b) / dt)
                    .collect(),
            ),
        };
        let guess: Vec<f64> = match &v_prev2 {
            None => v_prev.clone(),
            Some(vp2) => v_prev.iter().zip(vp2).map(|(a, b)| 2.0 * a - b).collect(),
        };
        let (v_new, _) = stepper.newton_plain(&guess, 0.0, beta, &hist, newton_tol, 25)?;
        t += dt;
        v_prev2 = Some(std::mem::replace(&mut v_prev, v_new));
        if (stride > 0 && step % stride == 0) || step == n_steps {
            out.push((
                t,
                Field::new(u0.grid.clone(), u0.m, v_prev.clone())
                    .map_err(|e| FreezeError::Setup(e.to_string()))?,
            ));
        }
    }
    Ok(out)
}

/// Newton solve of the steady freezing system `0 = R(v, mu), 0 = psi(v, mu)`.
pub fn steady_solve(
    problem: Problem1D,
    grid: Grid1D,
    guess: &Field,
    mu_guess: f64,
    template: &TemplateProfile,
    newton_tol: f64,
) -> Result<(Field, f64), FreezeError> {
    let stepper = Stepper1D::new(problem, grid);
    let hist = vec![0.0; guess.values.len()];
    let (v, mu, _) = stepper.newton_bordered(
        &guess.values,
        mu_guess,
        0.0,
        &hist,
        template,
        PhaseCondition::Fixed,
        newton_tol,
        50,
    )?;
    Ok((
        Field::new(guess.grid.clone(), guess.m, v).map_err(|e| FreezeError::Setup(e.to_string()))?,
        mu,
    ))
}
