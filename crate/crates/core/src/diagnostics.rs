//! L^p functionals of the Riemann pair and exponential-rate fitting.

use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::output::decimal17;
use crate::state::{sample_field, BoundarySpec, DampingField, GridState};

/// Sign-preserving power `v |v|^(e-1)`, with `0 -> 0`.
pub(crate) fn signed_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(e)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("p must lie in (1, inf), got {p}")))
    }
}

fn sum_abs_pow(v: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        v.iter().map(|x| x * x).sum()
    } else {
        v.iter().map(|x| x.abs().powf(p)).sum()
    }
}

/// Midpoint-rule L^p norm `(Σ |v_i|^p dx)^(1/p)`.
pub fn lp_norm(v: &[f64], p: f64, dx: f64) -> Result<f64> {
    check_p(p)?;
    Ok((sum_abs_pow(v, p) * dx).powf(1.0 / p))
}

/// `‖(rho, xi)‖_p = (‖rho‖_p^p + ‖xi‖_p^p)^(1/p)`.
pub fn pair_norm(state: &GridState, p: f64) -> Result<f64> {
    shifted_lp_norm(state, 0.0, p)
}

/// `E_p = (1/p) ‖(rho, xi)‖_p^p`.
pub fn energy_p(state: &GridState, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok((sum_abs_pow(&state.rho, p) + sum_abs_pow(&state.xi, p)) * state.dx() / p)
}

/// `∫ (rho + xi) dx`.
pub fn mass_integral(state: &GridState) -> f64 {
    state
        .rho
        .iter()
        .zip(&state.xi)
        .map(|(r, x)| r + x)
        .sum::<f64>()
        * state.dx()
}

/// Mean constant `c0 = ½ ∫ (rho_0 + xi_0) dx`, the Dirichlet steady value.
pub fn c0_constant(initial: &GridState) -> f64 {
    0.5 * mass_integral(initial)
}

/// `‖(rho - c0, xi - c0)‖_p`.
pub fn shifted_lp_norm(state: &GridState, c0: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    let s: f64 = state
        .rho
        .iter()
        .chain(&state.xi)
        .map(|v| {
            let d = v - c0;
            if p == 2.0 {
                d * d
            } else {
                d.abs().powf(p)
            }
        })
        .sum();
    Ok((s * state.dx()).powf(1.0 / p))
}

/// Dissipation integrand `(rho - xi)(rho|rho|^(p-2) - xi|xi|^(p-2))`.
pub(crate) fn dissipation_integrand(rho: f64, xi: f64, p: f64) -> f64 {
    if p == 2.0 {
        let d = rho - xi;
        d * d
    } else {
        (rho - xi) * (signed_pow(rho, p - 1.0) - signed_pow(xi, p - 1.0))
    }
}

/// `Σ coeff_i (rho_i - xi_i)(rho_i|rho_i|^(p-2) - xi_i|xi_i|^(p-2)) dx`.
pub fn dissipation_density(state: &GridState, coeff: &[f64], p: f64) -> f64 {
    state
        .rho
        .iter()
        .zip(&state.xi)
        .zip(coeff)
        .filter(|(_, &c)| c != 0.0)
        .map(|((&r, &x), &c)| c * dissipation_integrand(r, x, p))
        .sum::<f64>()
        * state.dx()
}

/// One-step contribution `dt · Σ a_i (...) dx` to `m_p`, with `a` sampled at
/// `state.t`.
pub fn dissipation_increment(state: &GridState, damping: &DampingField, p: f64, dt: f64) -> Result<f64> {
    check_p(p)?;
    let a = sample_field(damping, &state.grid(), state.t)?;
    Ok(dt * dissipation_density(state, &a, p))
}

/// Wall traces `(rho(t,0), xi(t,0), rho(t,1), xi(t,1))`, with the incoming
/// values given by the boundary closure.
pub fn boundary_traces(state: &GridState, boundary: &BoundarySpec) -> [f64; 4] {
    let n = state.n_cells();
    let (c_left, c_right) = boundary.coefficients();
    let rho_left = state.rho[0];
    let xi_right = state.xi[n - 1];
    [rho_left, c_left * rho_left, c_right * xi_right, xi_right]
}

/// Which norm a decay fit was made on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Raw,
    ShiftedByC0,
}

impl NormKind {
    pub fn label(&self) -> &'static str {
        match self {
            NormKind::Raw => "raw",
            NormKind::ShiftedByC0 => "shifted",
        }
    }
}

/// Time series of the diagnostics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSeries {
    pub p: f64,
    /// `c0` of the initial state.
    pub c0: f64,
    pub times: Vec<f64>,
    /// `E_p(t) = (1/p) ‖(rho, xi)(t)‖_p^p`.
    pub energy_p: Vec<f64>,
    pub mass: Vec<f64>,
    /// Time integral of the dissipation functional.
    pub cumulative_mp: Vec<f64>,
    pub rho_left: Vec<f64>,
    pub xi_left: Vec<f64>,
    pub rho_right: Vec<f64>,
    pub xi_right: Vec<f64>,
    /// `‖(rho - c0, xi - c0)(t)‖_p`.
    pub shifted_norm: Vec<f64>,
}

pub const CSV_HEADER: &str = "t,energy_p,mass,cumulative_mp,rho_left,xi_left,rho_right,xi_right";

impl DiagnosticsSeries {
    pub fn new(p: f64, c0: f64) -> Self {
        Self {
            p,
            c0,
            times: Vec::new(),
            energy_p: Vec::new(),
            mass: Vec::new(),
            cumulative_mp: Vec::new(),
            rho_left: Vec::new(),
            xi_left: Vec::new(),
            rho_right: Vec::new(),
            xi_right: Vec::new(),
            shifted_norm: Vec::new(),
        }
    }

    /// Appends a sample. Samples must arrive in increasing time.
    pub fn record(&mut self, state: &GridState, boundary: &BoundarySpec, cumulative_mp: f64) {
        if let Some(&last) = self.times.last() {
            assert!(state.t > last, "diagnostic samples must increase in time");
        }
        let p = self.p;
        let [rl, xl, rr, xr] = boundary_traces(state, boundary);
        self.times.push(state.t);
        self.energy_p
            .push((sum_abs_pow(&state.rho, p) + sum_abs_pow(&state.xi, p)) * state.dx() / p);
        self.mass.push(mass_integral(state));
        self.cumulative_mp.push(cumulative_mp);
        self.rho_left.push(rl);
        self.xi_left.push(xl);
        self.rho_right.push(rr);
        self.xi_right.push(xr);
        self.shifted_norm
            .push(shifted_lp_norm(state, self.c0, p).unwrap_or(f64::NAN));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `‖(rho, xi)(t)‖_p` recovered from the energy.
    pub fn raw_norm(&self) -> Vec<f64> {
        self.energy_p.iter().map(|e| (self.p * e).powf(1.0 / self.p)).collect()
    }

    pub fn norm(&self, kind: NormKind) -> Vec<f64> {
        match kind {
            NormKind::Raw => self.raw_norm(),
            NormKind::ShiftedByC0 => self.shifted_norm.clone(),
        }
    }

    /// Largest increase of `E_p` between consecutive samples (0 if none).
    pub fn max_energy_increase(&self) -> f64 {
        self.energy_p
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// CSV with the documented header, 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 200);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for k in 0..self.len() {
            let row = [
                self.times[k],
                self.energy_p[k],
                self.mass[k],
                self.cumulative_mp[k],
                self.rho_left[k],
                self.xi_left[k],
                self.rho_right[k],
                self.xi_right[k],
            ];
            let cells: Vec<String> = row.iter().map(|&v| decimal17(v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// `E_p(t_k) + ½ m_p(t_k) - E_p(0)` for every sample.
pub fn energy_identity_residual(series: &DiagnosticsSeries, initial_energy: f64) -> Vec<f64> {
    series
        .energy_p
        .iter()
        .zip(&series.cumulative_mp)
        .map(|(e, m)| e + 0.5 * m - initial_energy)
        .collect()
}

/// Values at or below this are treated as exactly zero by [`fit_decay`].
pub const FIT_FLOOR: f64 = 1e-300;

/// Minimum number of samples a fit window must hold.
pub const MIN_FIT_SAMPLES: usize = 5;

/// Outcome of a log-linear fit `value ≈ prefactor · exp(-gamma t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub gamma: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub norm_kind: NormKind,
    /// The series reached exact zero inside the window; `gamma` is `+inf`.
    pub extinct: bool,
    pub samples: usize,
}

impl DecayReport {
    /// `norm=<kind> gamma=<g> prefactor=<C> r2=<r> window=<lo>,<hi>`
    pub fn report_line(&self) -> String {
        format!(
            "norm={} gamma={} prefactor={} r2={} window={},{}",
            self.norm_kind.label(),
            decimal17(self.gamma),
            decimal17(self.prefactor),
            decimal17(self.r_squared),
            decimal17(self.window.0),
            decimal17(self.window.1),
        )
    }
}

/// The last 60% of the sampled horizon.
pub fn default_window(times: &[f64]) -> (f64, f64) {
    match (times.first(), times.last()) {
        (Some(&lo), Some(&hi)) => (lo + 0.4 * (hi - lo), hi),
        _ => (0.0, 0.0),
    }
}

/// Least-squares line through `(t, ln value)` on `window` (inclusive).
///
/// A window that touches exact zero reports extinction with `gamma = +inf`.
pub fn fit_decay(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayReport> {
    fit_decay_kind(times, values, window, NormKind::Raw)
}

pub fn fit_decay_kind(times: &[f64], values: &[f64], window: (f64, f64), kind: NormKind) -> Result<DecayReport> {
    if times.len() != values.len() {
        return Err(domain("times and values differ in length"));
    }
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Fit(format!("empty window ({lo}, {hi})")));
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t >= lo && t <= hi)
        .map(|(&t, &v)| (t, v))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples in window ({lo}, {hi}), need {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    if let Some(&(_, v)) = pts.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
        return Err(Error::Fit(format!("invalid value {v} in fit window")));
    }
    if pts.iter().any(|&(_, v)| v <= FIT_FLOOR) {
        return Ok(DecayReport {
            gamma: f64::INFINITY,
            prefactor: 0.0,
            window,
            r_squared: 1.0,
            norm_kind: kind,
            extinct: true,
            samples: pts.len(),
        });
    }

    let n = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(t, v) in &pts {
        let dt = t - t_mean;
        let dy = v.ln() - y_mean;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    let slope = sty / stt;
    let intercept = y_mean - slope * t_mean;
    let ss_res: f64 = pts
        .iter()
        .map(|&(t, v)| {
            let r = v.ln() - (intercept + slope * t);
            r * r
        })
        .sum();
    let r_squared = if syy <= 1e-28 * (1.0 + y_mean * y_mean) * n {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(DecayReport {
        gamma: -slope,
        prefactor: intercept.exp(),
        window,
        r_squared,
        norm_kind: kind,
        extinct: false,
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_boundary_dynamic, Grid};

    #[test]
    fn lp_norm_of_constant_one() {
        let v = vec![1.0; 37];
        for p in [1.1, 1.5, 2.0, 3.0, 7.5] {
            assert!((lp_norm(&v, p, 1.0 / 37.0).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lp_norm_of_identity_matches_closed_form() {
        // midpoint rule for ∫x² = 1/3 has error dx²/12
        let g = Grid::new(1000).unwrap();
        let v: Vec<f64> = g.centers().collect();
        let norm = lp_norm(&v, 2.0, g.dx()).unwrap();
        assert!((norm - (1.0f64 / 3.0).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn lp_norm_homogeneous_and_rejects_bad_p() {
        let v = [0.3, -1.2, 2.5, 0.0];
        let w: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
        for p in [1.5, 2.0, 4.0] {
            let a = lp_norm(&v, p, 0.25).unwrap();
            let b = lp_norm(&w, p, 0.25).unwrap();
            assert!((b - 2.0 * a).abs() < 1e-14);
        }
        for p in [1.0, 0.5, f64::INFINITY, f64::NAN] {
            assert!(lp_norm(&v, p, 0.25).is_err());
        }
    }

    #[test]
    fn mass_and_c0() {
        let g = Grid::new(10).unwrap();
        let anti = GridState::from_fns(&g, |x| x.sin(), |x| -x.sin());
        assert!(mass_integral(&anti).abs() < 1e-16);
        assert_eq!(c0_constant(&anti), 0.0);
        let ones = GridState::constant(&g, 1.0);
        assert!((mass_integral(&ones) - 2.0).abs() < 1e-14);
        assert!((c0_constant(&ones) - 1.0).abs() < 1e-14);
        let half = GridState::from_fns(&g, |x| if x < 0.5 { 2.0 } else { 0.0 }, |_| 0.0);
        assert!((c0_constant(&half) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn shifted_norm_cases() {
        let g = Grid::new(12).unwrap();
        let s = GridState::constant(&g, 0.75);
        assert_eq!(shifted_lp_norm(&s, 0.75, 3.0).unwrap(), 0.0);
        let r = GridState::from_fns(&g, |x| x, |x| 1.0 - 2.0 * x);
        for p in [1.5, 2.0, 3.0] {
            let a = shifted_lp_norm(&r, 0.0, p).unwrap();
            let b = pair_norm(&r, p).unwrap();
            assert_eq!(a, b);
            let e = energy_p(&r, p).unwrap();
            assert!(((p * e).powf(1.0 / p) - b).abs() < 1e-14);
        }
    }

    #[test]
    fn dissipation_cases() {
        let g = Grid::new(4).unwrap();
        let s = GridState::from_fns(&g, |x| x, |x| -x * x);
        assert_eq!(dissipation_increment(&s, &DampingField::zero(), 3.0, 0.1).unwrap(), 0.0);
        // single unit cell, a = 1, (1, -1), p = 2: a (ρ-ξ)² = 4
        let one = GridState {
            rho: vec![1.0],
            xi: vec![-1.0],
            t: 0.0,
        };
        assert_eq!(dissipation_density(&one, &[1.0], 2.0), 4.0);
        assert_eq!(dissipation_density(&one, &[1.0], 2.0) * 1.0, 4.0);
    }

    #[test]
    fn dissipation_integrand_zero_convention() {
        for p in [1.01, 1.2, 1.5] {
            assert_eq!(dissipation_integrand(0.0, 0.0, p), 0.0);
            let v = dissipation_integrand(0.0, 1e-12, p);
            assert!(v.is_finite() && v >= 0.0);
        }
    }

    #[test]
    fn traces_follow_closure() {
        let s = GridState::new(vec![2.0, 0.0, 1.0], vec![0.0, 5.0, -3.0]).unwrap();
        assert_eq!(boundary_traces(&s, &BoundarySpec::Dirichlet), [2.0, 2.0, -3.0, -3.0]);
        assert_eq!(boundary_traces(&s, &BoundarySpec::Neumann), [2.0, -2.0, 3.0, -3.0]);
        let d = make_boundary_dynamic(3.0).unwrap();
        assert_eq!(boundary_traces(&s, &d), [2.0, 1.0, -1.5, -3.0]);
    }

    #[test]
    fn fit_exact_exponential() {
        let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|t| 3.0 * (-0.3 * t).exp()).collect();
        let r = fit_decay(&t, &v, default_window(&t)).unwrap();
        assert!((r.gamma - 0.3).abs() < 1e-10);
        assert!((r.prefactor - 3.0).abs() < 1e-9);
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        assert!(!r.extinct);
    }

    #[test]
    fn fit_constant_series() {
        let t: Vec<f64> = (0..50).map(f64::from).collect();
        let v = vec![1.7; 50];
        let r = fit_decay(&t, &v, (0.0, 49.0)).unwrap();
        assert!(r.gamma.abs() < 1e-14);
        assert_eq!(r.r_squared, 1.0);
    }

    #[test]
    fn fit_extinction_and_errors() {
        let t: Vec<f64> = (0..20).map(f64::from).collect();
        let v: Vec<f64> = t.iter().map(|&t| if t < 5.0 { 1.0 } else { 0.0 }).collect();
        let r = fit_decay(&t, &v, (10.0, 19.0)).unwrap();
        assert!(r.extinct && r.gamma == f64::INFINITY);
        assert!(matches!(fit_decay(&t, &v, (0.0, 3.0)), Err(Error::Fit(_))));
        assert!(fit_decay(&t, &v, (5.0, 5.0)).is_err());
    }

    #[test]
    fn report_line_format() {
        let r = DecayReport {
            gamma: 0.5,
            prefactor: 2.0,
            window: (24.0, 60.0),
            r_squared: 1.0,
            norm_kind: NormKind::ShiftedByC0,
            extinct: false,
            samples: 10,
        };
        assert_eq!(
            r.report_line(),
            "norm=shifted gamma=0.50000000000000000 prefactor=2.0000000000000000 r2=1.0000000000000000 window=24.000000000000000,60.000000000000000"
        );
    }
}
