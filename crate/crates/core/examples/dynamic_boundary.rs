//! Dynamic walls with no interior damping. At kappa = 1 the walls absorb
//! every incoming wave and the state vanishes after one crossing.

use dampwave::solver::run;
use dampwave::state::{make_boundary_dynamic, DampingField, Grid, GridState, SimConfig};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(100)?;
    let initial = GridState::from_fns(&grid, |x| (4.0 * x).cos(), |x| x - 0.3);
    for kappa in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let boundary = make_boundary_dynamic(kappa)?;
        let cfg = SimConfig::new(grid, boundary, DampingField::zero(), 4.0);
        let out = run(&initial, &cfg)?;
        let (cl, _) = boundary.coefficients();
        println!(
            "kappa = {kappa:4}  reflection = {cl:+.4}  final sup = {:.3e}",
            out.final_state.sup_norm()
        );
    }
    Ok(())
}
