use freezewave_core::{Field, Grid1D};
use freezewave_freeze::freeze1d::{Freeze1DOptions, TemplateProfile};
use freezewave_freeze::wave::{first_order_reduction, reduced_initial_data, WaveProblem};

fn main() {
    let problem = WaveProblem::quintic_nagumo_wave(0.5, [0.0, 2.0/5.0, 0.5, 17.0/20.0, 1.0]).unwrap();
    let grid = Grid1D::new(-50.0, 50.0, 2001).unwrap();
    let u0 = Field::from_fn_1d(grid.clone(), 1, |x| vec![0.5 * (1.0 + (x / 2.0).tanh())]);
    let v0 = Field::zeros(grid.clone(), 1);
    let reduced = first_order_reduction(&problem, 0.0).unwrap();
    let red_u0 = reduced_initial_data(&problem, 0.0, &u0, &v0).unwrap();
    let red_template = TemplateProfile::new(red_u0.clone()).unwrap();
    let red_opts = Freeze1DOptions { dt: 0.1, t_end: 1500.0, steady_tol: 1e-9, ..Default::default() };
    match freezewave_freeze::run_freeze(reduced, grid, &red_u0, &red_template, &red_opts) {
        Ok(run) => println!("ok: mu={} t={} steady={}", run.final_state.mu, run.final_state.t, run.steady_reached),
        Err(e) => println!("err: {e}"),
    }
}
