//! Indicator damping between clamped walls. The constant mode survives, so
//! decay shows in the norm shifted by `c0`.

use dampwave::diagnostics::{default_window, fit_decay_kind, NormKind};
use dampwave::solver::run;
use dampwave::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(200)?;
    let initial = GridState::from_fns(&grid, |x| 1.0 + (3.0 * x).sin(), |x| 1.0 - x * x);
    let damping = DampingField::indicator(1.0, 0.5, 0.1)?;
    let cfg = SimConfig::new(grid, BoundarySpec::Dirichlet, damping, 60.0).with_record_every(20);
    let out = run(&initial, &cfg)?;
    let s = &out.series;
    println!("c0 = {:.6}", s.c0);
    for kind in [NormKind::Raw, NormKind::ShiftedByC0] {
        let fit = fit_decay_kind(&s.times, &s.norm(kind), default_window(&s.times), kind)?;
        println!("{}", fit.report_line());
    }
    Ok(())
}
