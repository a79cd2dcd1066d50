//! Dissipation bound, characteristic relation and witness point on one
//! retained trajectory.

use dampwave::lemmas::{best_monotonicity_constant, characteristic_difference_check, lem_ineq_bound, witness_point_search};
use dampwave::solver::run_retained;
use dampwave::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(200)?;
    let initial = GridState::from_fns(&grid, |x| (5.0 * x).sin() + 0.3, |x| (2.0 * x).cos());
    let damping = DampingField::indicator(1.5, 0.5, 0.1)?;
    let cfg = SimConfig::new(grid, BoundarySpec::Dirichlet, damping.clone(), 3.0);
    let (_, traj) = run_retained(&initial, &cfg)?;
    for p in [1.5, 2.0, 3.0] {
        let (lhs, rhs) = lem_ineq_bound(&traj, &damping, p)?;
        let c = best_monotonicity_constant(p)?;
        println!("p = {p}: ∫ a|rho - xi|^p = {lhs:.4e}  bound = {:.4e}", rhs / c);
    }
    let smooth = DampingField::from_fn(|_, x| 1.0 + x);
    let cfg = SimConfig::new(grid, BoundarySpec::Dirichlet, smooth.clone(), 1.0);
    let (_, traj) = run_retained(&initial, &cfg)?;
    let r = characteristic_difference_check(&traj, &smooth, 0.1, 0.5, 0.2 + 0.5 * grid.dx())?;
    println!("characteristic residual = {r:.3e}");
    let (_, traj) = run_retained(&initial, &SimConfig::new(grid, BoundarySpec::Dirichlet, damping, 3.0))?;
    let w = witness_point_search(&traj, 0.5, 0.1, 2.0)?;
    println!("witness z = {:.4}: trace {:.4e} <= strip mean {:.4e}", w.z, w.trace_integral, w.half_strip_mean);
    Ok(())
}
