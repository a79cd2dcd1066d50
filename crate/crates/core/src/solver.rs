//! Unit-CFL transport–relaxation solver for the Riemann pair.
//!
//! One step moves `rho` one cell toward `x = 0` and `xi` one cell toward
//! `x = 1` (exact for speeds ∓1 when `dt = dx`), and relaxes the difference
//! `rho - xi` by the exact solution of the local linear ODE. All
//! discretization error therefore lives in the splitting of the two.

use crate::diagnostics::{c0_constant, dissipation_density, DiagnosticsSeries};
use crate::error::{domain, Error, Result};
use crate::state::{BoundarySpec, DampingField, GridState, SimConfig, Splitting};

/// Incoming characteristic values `(xi at x=0, rho at x=1)` generated from
/// the outgoing traces `(rho at x=0, xi at x=1)`.
pub fn apply_boundary(outgoing_left: f64, outgoing_right: f64, boundary: &BoundarySpec) -> (f64, f64) {
    let (c_left, c_right) = boundary.coefficients();
    (c_left * outgoing_left, c_right * outgoing_right)
}

/// Exact shift by one cell, advancing `t` by `dx`.
pub fn transport_substep(state: &GridState, boundary: &BoundarySpec) -> GridState {
    let mut next = state.clone();
    transport_in_place(&mut next, boundary);
    next.t += state.dx();
    next
}

fn transport_in_place(state: &mut GridState, boundary: &BoundarySpec) {
    let n = state.n_cells();
    // closure uses the pre-shift wall traces
    let (xi_in, rho_in) = apply_boundary(state.rho[0], state.xi[n - 1], boundary);
    state.rho.rotate_left(1);
    state.rho[n - 1] = rho_in;
    state.xi.rotate_right(1);
    state.xi[0] = xi_in;
}

/// Inverse of [`transport_substep`]; moves `t` back by `dx`.
///
/// Fails for a dynamic wall with a zero reflection coefficient, whose
/// transport is not invertible.
pub fn reverse_transport_substep(state: &GridState, boundary: &BoundarySpec) -> Result<GridState> {
    let (c_left, c_right) = boundary.coefficients();
    if c_left == 0.0 || c_right == 0.0 {
        return Err(domain("transport with an absorbing wall is not invertible"));
    }
    let n = state.n_cells();
    let mut prev = state.clone();
    let rho_wall = state.xi[0] / c_left;
    let xi_wall = state.rho[n - 1] / c_right;
    prev.rho.rotate_right(1);
    prev.rho[0] = rho_wall;
    prev.xi.rotate_left(1);
    prev.xi[n - 1] = xi_wall;
    prev.t -= state.dx();
    Ok(prev)
}

/// Relaxes `rho - xi` over `dt` with the coefficient frozen at `state.t`.
///
/// The sum `rho + xi` is untouched; the difference is multiplied by
/// `exp(-2 q dt)` with `q = a/2 + b`.
pub fn source_substep(state: &GridState, damping: &DampingField, dt: f64) -> Result<GridState> {
    source_substep_at(state, damping, state.t, dt)
}

/// As [`source_substep`], evaluating the coefficient at `t_eval`.
pub fn source_substep_at(state: &GridState, damping: &DampingField, t_eval: f64, dt: f64) -> Result<GridState> {
    if !(dt > 0.0) {
        return Err(domain(format!("dt must be positive, got {dt}")));
    }
    let rates = damping.sample_rate(&state.grid(), t_eval)?;
    let mut next = state.clone();
    relax_in_place(&mut next, &rates, dt);
    Ok(next)
}

fn relax_in_place(state: &mut GridState, rates: &[f64], dt: f64) {
    for ((rho, xi), &q) in state.rho.iter_mut().zip(state.xi.iter_mut()).zip(rates) {
        if q == 0.0 {
            continue;
        }
        let d = *rho - *xi;
        // half of the loss in d: d (1 - e^{-2 q dt}) / 2
        let half_loss = -0.5 * d * (-2.0 * q * dt).exp_m1();
        *rho -= half_loss;
        *xi += half_loss;
    }
}

/// One full time step of length `dx`.
///
/// Lie: transport, then relaxation with the coefficient at `t`.
/// Strang: half relaxation, transport, half relaxation, both halves using
/// the coefficient at `t + dt/2`.
pub fn step(state: &GridState, cfg: &SimConfig) -> Result<GridState> {
    let mut next = state.clone();
    step_in_place(&mut next, cfg)?;
    Ok(next)
}

fn step_in_place(state: &mut GridState, cfg: &SimConfig) -> Result<()> {
    let dt = cfg.dt();
    let t = state.t;
    if cfg.damping.is_identically_zero() {
        transport_in_place(state, &cfg.boundary);
    } else {
        match cfg.splitting {
            Splitting::Lie => {
                let rates = cfg.damping.sample_rate(&cfg.grid, t)?;
                transport_in_place(state, &cfg.boundary);
                relax_in_place(state, &rates, dt);
            }
            Splitting::Strang => {
                let rates = cfg.damping.sample_rate(&cfg.grid, t + 0.5 * dt)?;
                relax_in_place(state, &rates, 0.5 * dt);
                transport_in_place(state, &cfg.boundary);
                relax_in_place(state, &rates, 0.5 * dt);
            }
        }
    }
    state.t = t + dt;
    Ok(())
}

/// Receives every state of a run, including the initial one (step 0).
pub trait StepObserver {
    fn observe(&mut self, step: usize, state: &GridState);
}

impl<F: FnMut(usize, &GridState)> StepObserver for F {
    fn observe(&mut self, step: usize, state: &GridState) {
        self(step, state)
    }
}

struct NoObserver;

impl StepObserver for NoObserver {
    fn observe(&mut self, _: usize, _: &GridState) {}
}

/// Full space-time history of a run, one state per step.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    states: Vec<GridState>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn states(&self) -> &[GridState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, step: usize) -> Option<&GridState> {
        self.states.get(step)
    }

    /// Time step between retained states.
    pub fn dt(&self) -> Result<f64> {
        match self.states.first() {
            Some(s) => Ok(s.dx()),
            None => Err(Error::State("empty trajectory".into())),
        }
    }
}

impl StepObserver for Trajectory {
    fn observe(&mut self, step: usize, state: &GridState) {
        debug_assert_eq!(step, self.states.len());
        self.states.push(state.clone());
    }
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_state: GridState,
    pub series: DiagnosticsSeries,
    /// Configuration warnings raised before stepping.
    pub warnings: Vec<String>,
}

/// Integrates `initial` to `cfg.t_final`, recording diagnostics every
/// `cfg.record_every` steps and at the final step.
pub fn run(initial: &GridState, cfg: &SimConfig) -> Result<RunOutput> {
    run_observed(initial, cfg, &mut NoObserver)
}

/// As [`run`], handing every state to `observer`.
pub fn run_observed(initial: &GridState, cfg: &SimConfig, observer: &mut dyn StepObserver) -> Result<RunOutput> {
    cfg.validate()?;
    if initial.n_cells() != cfg.grid.n_cells() {
        return Err(domain(format!(
            "initial state has {} cells, grid has {}",
            initial.n_cells(),
            cfg.grid.n_cells()
        )));
    }
    if let Some((quantity, cell)) = initial.first_non_finite() {
        return Err(Error::NonFinite { step: 0, quantity, cell });
    }

    let t0 = initial.t;
    let dt = cfg.dt();
    let n_steps = cfg.n_steps();
    let warnings = cfg
        .damping
        .validate(&cfg.grid, &[t0, t0 + 0.5 * cfg.t_final, t0 + cfg.t_final], cfg.alpha);
    for w in &warnings {
        log::warn!("{w}");
    }

    let dissipative = !cfg.damping.is_identically_zero();
    // effective coefficient a + 2b, so the recorded identity closes with b present
    let density = |state: &GridState| -> Result<f64> {
        if !dissipative {
            return Ok(0.0);
        }
        let coeff: Vec<f64> = cfg
            .damping
            .sample_rate(&cfg.grid, state.t)?
            .into_iter()
            .map(|q| 2.0 * q)
            .collect();
        Ok(dissipation_density(state, &coeff, cfg.p))
    };

    let mut series = DiagnosticsSeries::new(cfg.p, c0_constant(initial));
    let mut state = initial.clone();
    let mut cumulative = 0.0;
    let mut prev_density = density(&state)?;
    series.record(&state, &cfg.boundary, cumulative);
    observer.observe(0, &state);

    for k in 1..=n_steps {
        step_in_place(&mut state, cfg)?;
        state.t = t0 + k as f64 * dt;
        if let Some((quantity, cell)) = state.first_non_finite() {
            return Err(Error::NonFinite { step: k, quantity, cell });
        }
        let d = density(&state)?;
        cumulative += 0.5 * dt * (prev_density + d);
        prev_density = d;
        observer.observe(k, &state);
        if k % cfg.record_every == 0 || k == n_steps {
            series.record(&state, &cfg.boundary, cumulative);
        }
    }

    Ok(RunOutput {
        final_state: state,
        series,
        warnings,
    })
}

/// Runs and retains the whole trajectory.
pub fn run_retained(initial: &GridState, cfg: &SimConfig) -> Result<(RunOutput, Trajectory)> {
    let mut traj = Trajectory::new();
    let out = run_observed(initial, cfg, &mut traj)?;
    Ok((out, traj))
}
