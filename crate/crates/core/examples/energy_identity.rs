//! Energy lost equals energy dissipated, checked along a run.

use dampwave::diagnostics::{energy_identity_residual, energy_p};
use dampwave::solver::run;
use dampwave::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig, Splitting};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(400)?;
    let initial = GridState::from_fns(&grid, |x| (6.0 * x).sin(), |x| (2.0 * x).cos());
    let damping = DampingField::from_fn(|t, x| 2.0 * (1.0 + 0.5 * t.sin()) * (-(x - 0.4).powi(2) * 30.0).exp());
    for p in [1.5, 2.0, 3.0] {
        for split in [Splitting::Lie, Splitting::Strang] {
            let cfg = SimConfig::new(grid, BoundarySpec::Dirichlet, damping.clone(), 10.0)
                .with_p(p)
                .with_splitting(split);
            let out = run(&initial, &cfg)?;
            let e0 = energy_p(&initial, p)?;
            let worst = energy_identity_residual(&out.series, e0).into_iter().fold(0.0f64, |m, r| m.max(r.abs()));
            println!("p = {p}  {split:?}: max |E(t) + M(t)/2 - E(0)| / E(0) = {:.3e}", worst / e0);
        }
    }
    Ok(())
}
