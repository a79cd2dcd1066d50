//! Conversion between wave data `(u, u_t, u_x)` and the Riemann pair, plus
//! the d'Alembert reference solution used to validate the solver.
//!
//! `rho = u_x + u_t` and `xi = u_x - u_t`, so `u_t = (rho - xi)/2` and
//! `u_x = (rho + xi)/2`. The displacement `u` itself is recovered by
//! integrating `u_x` from the left wall.

use crate::error::{domain, Result};
use crate::quad::{adaptive_midpoint, adaptive_midpoint_split, integer_breaks};
use crate::solver::StepObserver;
use crate::state::{BoundarySpec, GridState};

/// Wave-equation fields at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub ux: Vec<f64>,
    pub t: f64,
}

/// Riemann data from the strain `∂_x u_0` and velocity `u_1`.
pub fn riemann_from_wave(u0_strain: &[f64], u1: &[f64]) -> Result<GridState> {
    if u0_strain.len() != u1.len() {
        return Err(domain(format!(
            "strain has {} samples but velocity has {}",
            u0_strain.len(),
            u1.len()
        )));
    }
    let rho = u0_strain.iter().zip(u1).map(|(s, v)| s + v).collect();
    let xi = u0_strain.iter().zip(u1).map(|(s, v)| s - v).collect();
    GridState::new(rho, xi)
}

/// Wave fields of `state`. `u` is anchored at the left wall: zero for
/// Dirichlet, `anchor` otherwise.
pub fn wave_from_riemann(state: &GridState, boundary: &BoundarySpec, anchor: f64) -> WaveState {
    let anchor = match boundary {
        BoundarySpec::Dirichlet => 0.0,
        _ => anchor,
    };
    let ut: Vec<f64> = state.rho.iter().zip(&state.xi).map(|(r, x)| 0.5 * (r - x)).collect();
    let ux: Vec<f64> = state.rho.iter().zip(&state.xi).map(|(r, x)| 0.5 * (r + x)).collect();
    let u = integrate_from_wall(&ux, state.dx(), anchor);
    WaveState { u, ut, ux, t: state.t }
}

/// `u(x_i) = anchor + ∫_0^{x_i} u_x`: midpoint sums over whole cells, plus
/// the half cell `[x_i - dx/2, x_i]` using `u_x` interpolated to its center.
fn integrate_from_wall(ux: &[f64], dx: f64, anchor: f64) -> Vec<f64> {
    let n = ux.len();
    let mut u = Vec::with_capacity(n);
    let mut whole = anchor;
    for i in 0..n {
        let quarter = if i == 0 {
            if n > 1 {
                (5.0 * ux[0] - ux[1]) / 4.0
            } else {
                ux[0]
            }
        } else {
            (3.0 * ux[i] + ux[i - 1]) / 4.0
        };
        u.push(whole + 0.5 * dx * quarter);
        whole += ux[i] * dx;
    }
    u
}

/// Second-order finite-difference strain of cell-center samples of `u`.
///
/// Use only when the analytic strain is unavailable; the result carries an
/// O(dx²) error that [`riemann_from_wave`] then inherits.
pub fn strain_from_samples(u: &[f64], dx: f64) -> Result<Vec<f64>> {
    let n = u.len();
    if n < 3 {
        return Err(domain("need at least three samples"));
    }
    let mut s = Vec::with_capacity(n);
    s.push((-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx));
    for i in 1..n - 1 {
        s.push((u[i + 1] - u[i - 1]) / (2.0 * dx));
    }
    s.push((3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dx));
    Ok(s)
}

/// `u_t` at `x = 0` from the outgoing trace `rho(t, 0)`.
fn wall_velocity(rho_wall: f64, boundary: &BoundarySpec) -> f64 {
    let (c_left, _) = boundary.coefficients();
    0.5 * (1.0 - c_left) * rho_wall
}

/// Tracks the left-wall value of `u` along a run and reconstructs wave
/// fields at requested steps.
///
/// The outgoing value in cell 0 reaches the wall half a step later, so the
/// wall velocity is integrated by the midpoint rule on those arrival times.
#[derive(Debug, Clone)]
pub struct WaveReconstructor {
    boundary: BoundarySpec,
    anchor: f64,
    last_wall_rho: Option<f64>,
    capture: Vec<usize>,
    captured: Vec<WaveState>,
}

impl WaveReconstructor {
    /// `u0_at_wall` is `u_0(0)`; `capture` lists the steps to keep.
    pub fn new(boundary: BoundarySpec, u0_at_wall: f64, mut capture: Vec<usize>) -> Self {
        capture.sort_unstable();
        capture.dedup();
        Self {
            boundary,
            anchor: u0_at_wall,
            last_wall_rho: None,
            capture,
            captured: Vec::new(),
        }
    }

    pub fn anchor(&self) -> f64 {
        match self.boundary {
            BoundarySpec::Dirichlet => 0.0,
            _ => self.anchor,
        }
    }

    pub fn captured(&self) -> &[WaveState] {
        &self.captured
    }

    pub fn into_captured(self) -> Vec<WaveState> {
        self.captured
    }
}

impl StepObserver for WaveReconstructor {
    fn observe(&mut self, step: usize, state: &GridState) {
        if let Some(rho) = self.last_wall_rho {
            self.anchor += state.dx() * wall_velocity(rho, &self.boundary);
        }
        self.last_wall_rho = Some(state.rho[0]);
        if self.capture.binary_search(&step).is_ok() {
            self.captured
                .push(wave_from_riemann(state, &self.boundary, self.anchor));
        }
    }
}

/// Reflection parity used to extend data from (0, 1) to the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Odd about 0 and 1 (Dirichlet displacement).
    Odd,
    /// Even about 0 and 1 (Neumann displacement).
    Even,
}

impl Parity {
    /// Parity of the spatial derivative.
    pub fn derivative(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }

    /// Maps `x` into [0, 1] by period-2 unfolding; returns the point and the
    /// sign picked up by the reflection.
    pub fn unfold(self, x: f64) -> (f64, f64) {
        let y = x.rem_euclid(2.0);
        if y <= 1.0 {
            (y, 1.0)
        } else {
            (
                2.0 - y,
                match self {
                    Parity::Odd => -1.0,
                    Parity::Even => 1.0,
                },
            )
        }
    }

    pub fn extend<F: Fn(f64) -> f64>(self, f: F) -> impl Fn(f64) -> f64 {
        move |x| {
            let (y, sign) = self.unfold(x);
            sign * f(y)
        }
    }

    pub fn extend_space_time<G: Fn(f64, f64) -> f64>(self, g: G) -> impl Fn(f64, f64) -> f64 {
        move |t, x| {
            let (y, sign) = self.unfold(x);
            sign * g(t, y)
        }
    }
}

/// Tolerance of the reference quadratures.
pub const ORACLE_TOL: f64 = 1e-10;

/// Source term `g(t, x)` of the reference solution.
pub type Forcing<'a> = Option<&'a dyn Fn(f64, f64) -> f64>;

/// d'Alembert solution of `u_tt - u_xx = g` on the line with extended data:
///
/// `u = ½(u0(x-t) + u0(x+t)) + ½∫_{x-t}^{x+t} u1 + ½∫_0^t∫_{x-t+τ}^{x+t-τ} g(τ, y) dy dτ`.
pub fn dalembert_reference(
    u0_ext: &dyn Fn(f64) -> f64,
    u1_ext: &dyn Fn(f64) -> f64,
    g_ext: Forcing<'_>,
    t: f64,
    x: f64,
) -> Result<f64> {
    check_point(t, x)?;
    let mut u = 0.5 * (u0_ext(x - t) + u0_ext(x + t));
    if t > 0.0 {
        u += 0.5 * integrate_extended(u1_ext, x - t, x + t)?;
        if let Some(g) = g_ext {
            let inner = |tau: f64| {
                let slice = |y: f64| g(tau, y);
                integrate_extended(&slice, x - t + tau, x + t - tau).unwrap_or(f64::NAN)
            };
            let v = adaptive_midpoint(&inner, 0.0, t, ORACLE_TOL)?;
            if v.is_nan() {
                return Err(crate::error::Error::Accuracy {
                    lo: 0.0,
                    hi: t,
                    estimate: f64::NAN,
                });
            }
            u += 0.5 * v;
        }
    }
    Ok(u)
}

/// `(u_t, u_x)` of the d'Alembert solution, integrating the forcing along
/// the two characteristics through `(t, x)`.
pub fn trace_derivatives_dalembert(
    strain_ext: &dyn Fn(f64) -> f64,
    u1_ext: &dyn Fn(f64) -> f64,
    g_ext: Forcing<'_>,
    t: f64,
    x: f64,
) -> Result<(f64, f64)> {
    check_point(t, x)?;
    let (sp, sm) = (strain_ext(x + t), strain_ext(x - t));
    let (vp, vm) = (u1_ext(x + t), u1_ext(x - t));
    let mut ut = 0.5 * (sp - sm) + 0.5 * (vp + vm);
    let mut ux = 0.5 * (sp + sm) + 0.5 * (vp - vm);
    if let (Some(g), true) = (g_ext, t > 0.0) {
        let left_moving = |tau: f64| g(tau, x + t - tau);
        let right_moving = |tau: f64| g(tau, x - t + tau);
        // reflections jump where the characteristic crosses an integer
        let a = adaptive_midpoint_split(&left_moving, 0.0, t, ORACLE_TOL, &crossing_times(x + t, -1.0, t))?;
        let b = adaptive_midpoint_split(&right_moving, 0.0, t, ORACLE_TOL, &crossing_times(x - t, 1.0, t))?;
        ut += 0.5 * (a + b);
        ux += 0.5 * (a - b);
    }
    Ok((ut, ux))
}

/// Integral of a reflected function, split where reflections may jump.
fn integrate_extended(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    adaptive_midpoint_split(f, a, b, ORACLE_TOL, &integer_breaks(a, b))
}

/// Times `τ` in `(0, t)` at which the characteristic `y = y0 + dir·τ`
/// crosses an integer.
fn crossing_times(y0: f64, dir: f64, t: f64) -> Vec<f64> {
    integer_breaks(y0, y0 + dir * t)
        .into_iter()
        .map(|k| (k - y0) * dir)
        .collect()
}

fn check_point(t: f64, x: f64) -> Result<()> {
    if !(t >= 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("reference needs t >= 0 and x in [0, 1], got t={t}, x={x}")));
    }
    Ok(())
}

/// Two-sided constants `(lo, hi)` with
/// `lo (‖rho‖^p + ‖xi‖^p) <= ‖u_t‖^p + ‖u_x‖^p <= hi (‖rho‖^p + ‖xi‖^p)`.
pub fn norm_equivalence_bounds(p: f64) -> (f64, f64) {
    let a = 0.5f64;
    let b = 2f64.powf(1.0 - p);
    (a.min(b), a.max(b))
}

/// `(‖u_t‖^p + ‖u_x‖^p) / (‖rho‖^p + ‖xi‖^p)`.
pub fn wave_energy_ratio(state: &GridState, p: f64) -> f64 {
    let (mut wave, mut pair) = (0.0, 0.0);
    for (&r, &x) in state.rho.iter().zip(&state.xi) {
        wave += (0.5 * (r - x)).abs().powf(p) + (0.5 * (r + x)).abs().powf(p);
        pair += r.abs().powf(p) + x.abs().powf(p);
    }
    wave / pair
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Grid;
    use std::f64::consts::PI;

    #[test]
    fn transform_cases() {
        let g = Grid::new(16).unwrap();
        let strain: Vec<f64> = g.centers().map(|x| PI * (PI * x).cos()).collect();
        let s = riemann_from_wave(&strain, &vec![0.0; 16]).unwrap();
        assert_eq!(s.rho, strain);
        assert_eq!(s.xi, strain);
        let s = riemann_from_wave(&[0.0; 3], &[1.0; 3]).unwrap();
        assert_eq!(s.rho, vec![1.0; 3]);
        assert_eq!(s.xi, vec![-1.0; 3]);
        assert!(riemann_from_wave(&[0.0; 3], &[1.0; 4]).is_err());
    }

    #[test]
    fn zero_and_antisymmetric_states() {
        let g = Grid::new(8).unwrap();
        let zero = GridState::constant(&g, 0.0);
        assert!(wave_from_riemann(&zero, &BoundarySpec::Dirichlet, 5.0).u.iter().all(|&u| u == 0.0));
        assert!(wave_from_riemann(&zero, &BoundarySpec::Neumann, 0.5).u.iter().all(|&u| u == 0.5));
        let anti = GridState::from_fns(&g, |x| x.cos(), |x| -x.cos());
        let w = wave_from_riemann(&anti, &BoundarySpec::Neumann, -1.0);
        assert!(w.ux.iter().all(|&v| v == 0.0));
        assert!(w.u.iter().all(|&u| u == -1.0));
    }

    #[test]
    fn reconstruction_error_bound() {
        for n in [10, 50, 200, 1000] {
            let g = Grid::new(n).unwrap();
            let s = GridState::from_fns(&g, |x| PI * (PI * x).cos(), |x| PI * (PI * x).cos());
            let w = wave_from_riemann(&s, &BoundarySpec::Dirichlet, 0.0);
            let err = g
                .centers()
                .zip(&w.u)
                .map(|(x, u)| (u - (PI * x).sin()).abs())
                .fold(0.0, f64::max);
            let bound = PI.powi(3) / 24.0 * g.dx().powi(2) * 2.0;
            assert!(err <= bound, "n={n}: {err} > {bound}");
        }
    }

    #[test]
    fn finite_difference_strain_is_second_order() {
        let errs: Vec<f64> = [50, 100]
            .iter()
            .map(|&n| {
                let g = Grid::new(n).unwrap();
                let u: Vec<f64> = g.centers().map(|x| (PI * x).sin()).collect();
                let s = strain_from_samples(&u, g.dx()).unwrap();
                g.centers()
                    .zip(&s)
                    .map(|(x, v)| (v - PI * (PI * x).cos()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] / errs[1] > 3.5);
    }

    #[test]
    fn parity_unfolding() {
        let odd = Parity::Odd.extend(|x| x);
        assert!((odd(-0.25) + 0.25).abs() < 1e-15);
        assert!((odd(1.25) + 0.75).abs() < 1e-15);
        assert!((odd(1.25) + odd(-1.25)).abs() < 1e-15);
        let even = Parity::Even.extend(|x| x);
        assert!((even(-0.25) - 0.25).abs() < 1e-15);
        assert!((even(2.25) - 0.25).abs() < 1e-15);
        assert_eq!(Parity::Odd.derivative(), Parity::Even);
    }

    #[test]
    fn standing_wave_reference() {
        let u0 = Parity::Odd.extend(|x| (PI * x).sin());
        let u1 = |_: f64| 0.0;
        for (t, x) in [(0.0, 0.3), (0.37, 0.5), (1.3, 0.9), (3.9, 0.05)] {
            let u = dalembert_reference(&u0, &u1, None, t, x).unwrap();
            assert!((u - (PI * x).sin() * (PI * t).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn initial_row() {
        let u0 = Parity::Odd.extend(|x| x * (1.0 - x));
        let u1 = Parity::Odd.extend(|x| x);
        for x in [0.0, 0.2, 0.7, 1.0] {
            assert_eq!(dalembert_reference(&u0, &u1, None, 0.0, x).unwrap(), x * (1.0 - x));
        }
    }

    #[test]
    fn velocity_only_reference() {
        let u0 = |_: f64| 0.0;
        let u1 = Parity::Odd.extend(|x| (PI * x).sin());
        for (t, x) in [(0.25, 0.5), (1.7, 0.1), (3.0, 0.66)] {
            let u = dalembert_reference(&u0, &u1, None, t, x).unwrap();
            // ½∫ sin(πy) dy over [x-t, x+t] in closed form
            let closed = ((PI * (x - t)).cos() - (PI * (x + t)).cos()) / (2.0 * PI);
            assert!((closed - (PI * x).sin() * (PI * t).sin() / PI).abs() < 1e-14);
            assert!((u - closed).abs() < 1e-9);
        }
    }

    #[test]
    fn standing_wave_traces() {
        let strain = Parity::Even.extend(|x| PI * (PI * x).cos());
        let u1 = |_: f64| 0.0;
        for (t, x) in [(0.4, 0.3), (2.2, 0.75)] {
            let (ut, ux) = trace_derivatives_dalembert(&strain, &u1, None, t, x).unwrap();
            assert!((ut + PI * (PI * x).sin() * (PI * t).sin()).abs() < 1e-13);
            assert!((ux - PI * (PI * x).cos() * (PI * t).cos()).abs() < 1e-13);
        }
        let v = Parity::Odd.extend(|x| x * x);
        let (ut, ux) = trace_derivatives_dalembert(&strain, &v, None, 0.0, 0.4).unwrap();
        assert_eq!((ut, ux), (0.16000000000000003, strain(0.4)));
    }

    /// Brute-force tensor midpoint rule over the backward characteristic
    /// triangle, independent of the adaptive routine.
    fn brute_force_forced(g: &dyn Fn(f64, f64) -> f64, t: f64, x: f64, m: usize) -> f64 {
        let h = t / m as f64;
        let mut total = 0.0;
        for k in 0..m {
            let tau = (k as f64 + 0.5) * h;
            let (lo, hi) = (x - t + tau, x + t - tau);
            let hy = (hi - lo) / m as f64;
            for j in 0..m {
                total += g(tau, lo + (j as f64 + 0.5) * hy) * hy * h;
            }
        }
        0.5 * total
    }

    #[test]
    fn forced_reference_matches_brute_force() {
        let g = Parity::Odd.extend_space_time(|_, _| 1.0);
        let zero = |_: f64| 0.0;
        let (t, x) = (0.25, 0.5);
        let u = dalembert_reference(&zero, &zero, Some(&g), t, x).unwrap();
        assert!((u - t * t / 2.0).abs() < 1e-9);
        assert!((u - brute_force_forced(&g, t, x, 400)).abs() < 1e-6);

        // traces against centered differences of the brute-force solution
        let h = 1e-3;
        let ut_fd = (brute_force_forced(&g, t + h, x, 600) - brute_force_forced(&g, t - h, x, 600)) / (2.0 * h);
        let ux_fd = (brute_force_forced(&g, t, x + h, 600) - brute_force_forced(&g, t, x - h, 600)) / (2.0 * h);
        let (ut, ux) = trace_derivatives_dalembert(&zero, &zero, Some(&g), t, x).unwrap();
        assert!((ut - 0.25).abs() < 1e-9);
        assert!(ux.abs() < 1e-9);
        assert!((ut - ut_fd).abs() < 1e-3);
        assert!((ux - ux_fd).abs() < 1e-3);
    }

    #[test]
    fn reference_rejects_bad_points() {
        let f = |_: f64| 0.0;
        assert!(dalembert_reference(&f, &f, None, -0.1, 0.5).is_err());
        assert!(dalembert_reference(&f, &f, None, 0.1, 1.5).is_err());
    }

    #[test]
    fn equivalence_constants() {
        assert_eq!(norm_equivalence_bounds(2.0), (0.5, 0.5));
        assert_eq!(norm_equivalence_bounds(3.0), (0.25, 0.5));
        let (lo, hi) = norm_equivalence_bounds(1.5);
        assert_eq!(lo, 0.5);
        assert!((hi - 2f64.powf(-0.5)).abs() < 1e-15);
    }
}
