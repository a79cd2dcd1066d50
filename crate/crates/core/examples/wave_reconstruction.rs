//! Recovers `u` from a damped Riemann run and tracks how the wave energy
//! compares with the Riemann energy.

use std::f64::consts::PI;

use dampwave::solver::run_observed;
use dampwave::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig};
use dampwave::wave::{norm_equivalence_bounds, wave_energy_ratio, WaveReconstructor};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 200;
    let grid = Grid::new(n)?;
    // u = sin(pi x), u_t = 0
    let initial = GridState::from_fns(&grid, |x| PI * (PI * x).cos(), |x| PI * (PI * x).cos());
    let cfg = SimConfig::new(grid, BoundarySpec::Dirichlet, DampingField::indicator(2.0, 0.5, 0.2)?, 8.0);
    let capture: Vec<usize> = (0..=4).map(|k| k * n).collect();
    let mut recon = WaveReconstructor::new(BoundarySpec::Dirichlet, 0.0, capture);
    let out = run_observed(&initial, &cfg, &mut recon)?;
    let (lo, hi) = norm_equivalence_bounds(3.0);
    println!("wave / riemann energy bounds at p = 3: [{lo}, {hi}]");
    for w in recon.captured() {
        let peak = w.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!("t = {:.1}  max |u| = {peak:.5}", w.t);
    }
    println!("final ratio = {:.4}", wave_energy_ratio(&out.final_state, 3.0));
    Ok(())
}
