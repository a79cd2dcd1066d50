//! A small sign-changing perturbation of the damping leaves the decay rate
//! close to the unperturbed one.

use dampwave::diagnostics::{default_window, fit_decay_kind, NormKind};
use dampwave::solver::run;
use dampwave::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(200)?;
    let initial = GridState::from_fns(&grid, |x| (3.0 * x).sin(), |x| 0.5 - x);
    for amp in [0.0, 0.02, 0.05] {
        let damping = DampingField::indicator(1.0, 0.5, 0.1)?.with_perturbation(
            move |t, x| amp * (2.0 * std::f64::consts::PI * x).sin() * t.sin(),
            amp,
        );
        let cfg = SimConfig::new(grid, BoundarySpec::Dirichlet, damping, 60.0).with_record_every(20);
        let out = run(&initial, &cfg)?;
        let s = &out.series;
        let fit = fit_decay_kind(&s.times, &s.norm(NormKind::ShiftedByC0), default_window(&s.times), NormKind::ShiftedByC0)?;
        println!("amplitude = {amp:.2}  gamma = {:.5}  r2 = {:.4}", fit.gamma, fit.r_squared);
    }
    Ok(())
}
