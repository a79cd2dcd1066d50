//! Free walls: the constant pair flips sign each traversal and any damping
//! drives the full state to zero.

use dampwave::diagnostics::{default_window, fit_decay_kind, NormKind};
use dampwave::solver::run;
use dampwave::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(200)?;
    let initial = GridState::constant(&grid, 1.0);
    let cfg = SimConfig::new(grid, BoundarySpec::Neumann, DampingField::indicator(1.0, 0.5, 0.1)?, 200.0)
        .with_record_every(50);
    let out = run(&initial, &cfg)?;
    let s = &out.series;
    let fit = fit_decay_kind(&s.times, &s.raw_norm(), default_window(&s.times), NormKind::Raw)?;
    println!("{}", fit.report_line());
    for (t, e) in s.times.iter().zip(&s.energy_p).step_by(s.len() / 8) {
        println!("t = {t:7.2}  E_p = {e:.6e}");
    }
    Ok(())
}
