//! Checks evaluated on retained solver trajectories.

use crate::diagnostics::dissipation_integrand;
use crate::error::{domain, Error, Result};
use crate::solver::Trajectory;
use crate::state::{DampingField, GridState};

fn require_states(traj: &Trajectory) -> Result<&[GridState]> {
    if traj.is_empty() {
        return Err(Error::State("no retained states".into()));
    }
    Ok(traj.states())
}

fn trapezoid_weight(k: usize, last: usize) -> f64 {
    if last == 0 {
        0.0
    } else if k == 0 || k == last {
        0.5
    } else {
        1.0
    }
}

/// Space-time integrals `(∫∫ a |rho - xi|^p, m_p)` over a retained run,
/// trapezoid in time and midpoint in space.
pub fn dissipation_integrals(traj: &Trajectory, damping: &DampingField, p: f64) -> Result<(f64, f64)> {
    let states = require_states(traj)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain(format!("p must lie in (1, inf), got {p}")));
    }
    let last = states.len() - 1;
    let dt = traj.dt()?;
    let (mut lhs, mut mp) = (0.0, 0.0);
    for (k, s) in states.iter().enumerate() {
        let w = trapezoid_weight(k, last) * dt * s.dx();
        if w == 0.0 {
            continue;
        }
        let grid = s.grid();
        for (i, x) in grid.centers().enumerate() {
            let a = damping.eval(s.t, x);
            if a == 0.0 {
                continue;
            }
            let (r, q) = (s.rho[i], s.xi[i]);
            let d = r - q;
            lhs += w * a * if p == 2.0 { d * d } else { d.abs().powf(p) };
            mp += w * a * dissipation_integrand(r, q, p);
        }
    }
    Ok((lhs, mp))
}

/// `(∫∫ a |rho - xi|^p, rhs)` with `rhs = m_p` for `p >= 2` and
/// `m_p + m_p^(2/p)` for `1 < p < 2`.
pub fn lem_ineq_bound(traj: &Trajectory, damping: &DampingField, p: f64) -> Result<(f64, f64)> {
    let (lhs, mp) = dissipation_integrals(traj, damping, p)?;
    let rhs = if p >= 2.0 { mp } else { mp + mp.max(0.0).powf(2.0 / p) };
    Ok((lhs, rhs))
}

fn steps_of(value: f64, dx: f64, what: &str) -> Result<usize> {
    let k = value / dx;
    let r = k.round();
    if !(value >= 0.0) || (k - r).abs() > 1e-6 {
        return Err(domain(format!("{what}={value} is not a multiple of dx={dx}")));
    }
    Ok(r as usize)
}

/// `|xi(t+s, y+s) - xi(t, y) - ½ ∫_0^s a (rho - xi) dτ|` along the rightward
/// characteristic from `(t, y)`, the integral by the trapezoid rule over
/// the cells it visits. Time `t` is measured from the first retained state.
pub fn characteristic_difference_check(traj: &Trajectory, damping: &DampingField, t: f64, s: f64, y: f64) -> Result<f64> {
    let states = require_states(traj)?;
    let dx = traj.dt()?;
    let k0 = steps_of(t, dx, "t")?;
    let m = steps_of(s, dx, "s")?;
    let grid = states[0].grid();
    let j = grid.cell_of(y);
    if (grid.center(j) - y).abs() > 1e-9 * dx.max(1.0) {
        return Err(domain(format!("y={y} is not a cell center")));
    }
    if j + m >= grid.n_cells() {
        return Err(domain("characteristic leaves the domain"));
    }
    if k0 + m >= states.len() {
        return Err(Error::State(format!(
            "trajectory holds {} states, need step {}",
            states.len(),
            k0 + m
        )));
    }
    let mut integral = 0.0;
    for r in 0..=m {
        let st = &states[k0 + r];
        let cell = j + r;
        // full effective coefficient: a + 2b
        let coeff = 2.0 * damping.rate(st.t, grid.center(cell));
        integral += trapezoid_weight(r, m) * coeff * (st.rho[cell] - st.xi[cell]) * dx;
    }
    let change = states[k0 + m].xi[j + m] - states[k0].xi[j];
    Ok((change - 0.5 * integral).abs())
}

/// Minimizing trace of `|rho - xi|^p` over the half-strip around the
/// damping support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub z: f64,
    pub cell: usize,
    /// `∫_0^T |rho - xi|^p (t, z) dt`.
    pub trace_integral: f64,
    /// `∫_0^T ∫_{|x - x0| < eps0} |rho - xi|^p`.
    pub strip_integral: f64,
    /// Mean of the trace integrals over the half-strip cells.
    pub half_strip_mean: f64,
}

/// Cell center `z` in `(x0 - eps0/2, x0 + eps0/2)` minimizing the time
/// integral of `|rho - xi|^p`.
pub fn witness_point_search(traj: &Trajectory, x0: f64, eps0: f64, p: f64) -> Result<Witness> {
    let states = require_states(traj)?;
    if !(eps0 > 0.0) {
        return Err(domain(format!("eps0 must be positive, got {eps0}")));
    }
    let dt = traj.dt()?;
    let grid = states[0].grid();
    let last = states.len() - 1;
    let trace = |cell: usize| -> f64 {
        states
            .iter()
            .enumerate()
            .map(|(k, s)| trapezoid_weight(k, last) * (s.rho[cell] - s.xi[cell]).abs().powf(p))
            .sum::<f64>()
            * dt
    };
    let in_band = |half_width: f64| -> Vec<usize> {
        grid.centers()
            .enumerate()
            .filter(|(_, x)| (x - x0).abs() < half_width)
            .map(|(i, _)| i)
            .collect()
    };
    let half = in_band(0.5 * eps0);
    if half.is_empty() {
        return Err(Error::GridTooCoarse(format!(
            "no cell center in ({}, {})",
            x0 - 0.5 * eps0,
            x0 + 0.5 * eps0
        )));
    }
    let half_traces: Vec<(usize, f64)> = half.iter().map(|&i| (i, trace(i))).collect();
    let (cell, trace_integral) = half_traces
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let half_strip_mean = half_traces.iter().map(|t| t.1).sum::<f64>() / half_traces.len() as f64;
    let strip_integral = in_band(eps0).into_iter().map(trace).sum::<f64>() * grid.dx();
    Ok(Witness {
        z: grid.center(cell),
        cell,
        trace_integral,
        strip_integral,
        half_strip_mean,
    })
}
