//! Commands behind the `dampwave` binary. Each returns a process exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{ConfigError, InitialPreset, RunConfig};
use crate::diagnostics::{default_window, fit_decay_kind, DecayReport, NormKind};
use crate::error::Error;
use crate::lemmas::{run_lemma_suite, SuiteOptions};
use crate::output::{decimal17, write_atomic};
use crate::solver::{run, run_observed};
use crate::state::BoundarySpec;
use crate::wave::{dalembert_reference, trace_derivatives_dalembert, Parity, WaveReconstructor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

/// What to run.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Simulate,
    Sweep { vary: String, values: Vec<String> },
    VerifyLemmas { trials: usize, force_violation: bool },
    OracleCompare,
}

/// One invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    /// Unused by `verify-lemmas`.
    pub config_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: u64,
}

/// Dispatches to the matching `cmd_*` function.
pub fn execute(manifest: &RunManifest) -> i32 {
    match &manifest.command {
        Command::VerifyLemmas { trials, force_violation } => {
            cmd_verify_lemmas(manifest.seed, *trials, &manifest.output_dir, *force_violation)
        }
        other => {
            let Some(config) = manifest.config_path.as_deref() else {
                eprintln!("error: --config is required");
                return EXIT_CONFIG;
            };
            match other {
                Command::Simulate => cmd_simulate(config, &manifest.output_dir),
                Command::Sweep { vary, values } => cmd_sweep(config, vary, values, &manifest.output_dir),
                _ => cmd_oracle_compare(config, &manifest.output_dir),
            }
        }
    }
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug, Clone)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure {
            code: EXIT_CONFIG,
            msg: format!("config error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonFinite { .. } | Error::Evaluation { .. } => EXIT_BLOW_UP,
            Error::Violation { .. } => EXIT_VIOLATION,
            Error::Accuracy { .. } => EXIT_ORACLE,
            _ => EXIT_CONFIG,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        msg: format!("cannot write {}: {e}", path.display()),
    }
}

fn finish(result: Result<(), Failure>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("{}", f.msg);
            f.code
        }
    }
}

fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    write_atomic(&path, contents.as_bytes()).map_err(|e| io_failure(&path, e))
}

/// Per-run numbers reported by sweeps.
#[derive(Debug, Clone, Copy)]
struct RunSummary {
    gamma: f64,
    r_squared: f64,
    final_energy: f64,
}

fn fit_line(times: &[f64], values: &[f64], window: (f64, f64), kind: NormKind) -> (String, Option<DecayReport>) {
    match fit_decay_kind(times, values, window, kind) {
        Ok(r) => (r.report_line(), Some(r)),
        Err(e) => {
            log::warn!("{} fit failed: {e}", kind.label());
            (
                format!(
                    "norm={} gamma=nan prefactor=nan r2=nan window={},{}",
                    kind.label(),
                    decimal17(window.0),
                    decimal17(window.1)
                ),
                None,
            )
        }
    }
}

fn simulate_into(cfg: &RunConfig, out: &Path) -> Result<RunSummary, Failure> {
    let sim = cfg.sim_config()?;
    let initial = cfg.initial.state(&sim.grid);
    let result = run(&initial, &sim)?;
    let series = &result.series;

    let window = cfg.fit_window.unwrap_or_else(|| default_window(&series.times));
    let mut report = String::new();
    let mut fits = Vec::new();
    for kind in [NormKind::Raw, NormKind::ShiftedByC0] {
        let (line, fit) = fit_line(&series.times, &series.norm(kind), window, kind);
        report.push_str(&line);
        report.push('\n');
        fits.push(fit);
    }

    let mut final_csv = String::from("x,rho,xi\n");
    for (i, x) in sim.grid.centers().enumerate() {
        let _ = writeln!(
            final_csv,
            "{},{},{}",
            decimal17(x),
            decimal17(result.final_state.rho[i]),
            decimal17(result.final_state.xi[i])
        );
    }

    prepare_dir(out)?;
    write_file(out, "series.csv", &series.to_csv())?;
    write_file(out, "decay_report.txt", &report)?;
    write_file(out, "final_state.csv", &final_csv)?;

    // constants are steady under Dirichlet coupling, so decay is read off
    // the shifted norm there
    let primary = if sim.boundary == BoundarySpec::Dirichlet { &fits[1] } else { &fits[0] };
    Ok(RunSummary {
        gamma: primary.as_ref().map_or(f64::NAN, |r| r.gamma),
        r_squared: primary.as_ref().map_or(f64::NAN, |r| r.r_squared),
        final_energy: series.energy_p.last().copied().unwrap_or(f64::NAN),
    })
}

/// `simulate --config PATH --out DIR`.
pub fn cmd_simulate(config: &Path, out: &Path) -> i32 {
    finish(RunConfig::load(config).map_err(Failure::from).and_then(|cfg| simulate_into(&cfg, out).map(|_| ())))
}

/// `sweep --config PATH --vary KEY --values v1,v2,... --out DIR`.
///
/// Sub-runs go to `DIR/KEY=VALUE/` and run in parallel; a failing sub-run
/// is marked in `summary.csv` and `failures.txt` and the exit code is the
/// largest sub-run code.
pub fn cmd_sweep(config: &Path, vary: &str, values: &[String], out: &Path) -> i32 {
    let base = match RunConfig::load(config) {
        Ok(c) => c,
        Err(e) => return finish(Err(e.into())),
    };
    if values.is_empty() {
        return finish(Err(Failure {
            code: EXIT_CONFIG,
            msg: "sweep needs at least one value".into(),
        }));
    }
    // reject an unsweepable key before starting any run
    if let Err(e) = base.clone().set_sweep(vary, &values[0]) {
        if matches!(&e, ConfigError::Invalid { key, .. } if key == "vary") {
            return finish(Err(e.into()));
        }
    }
    if let Err(f) = prepare_dir(out) {
        return finish(Err(f));
    }
    let results: Vec<Result<RunSummary, Failure>> = values
        .par_iter()
        .map(|v| {
            let mut cfg = base.clone();
            cfg.set_sweep(vary, v)?;
            simulate_into(&cfg, &out.join(format!("{vary}={v}")))
        })
        .collect();

    let mut summary = String::from("value,gamma,r_squared,final_energy\n");
    let mut failures = String::new();
    let mut code = EXIT_OK;
    for (v, r) in values.iter().zip(&results) {
        match r {
            Ok(s) => {
                let _ = writeln!(
                    summary,
                    "{v},{},{},{}",
                    decimal17(s.gamma),
                    decimal17(s.r_squared),
                    decimal17(s.final_energy)
                );
            }
            Err(f) => {
                let _ = writeln!(summary, "{v},nan,nan,nan");
                let _ = writeln!(failures, "{vary}={v} exit={} {}", f.code, f.msg);
                eprintln!("{vary}={v}: {}", f.msg);
                code = code.max(f.code);
            }
        }
    }
    let written = write_file(out, "summary.csv", &summary).and_then(|_| {
        if failures.is_empty() {
            Ok(())
        } else {
            write_file(out, "failures.txt", &failures)
        }
    });
    match written {
        Ok(()) => code,
        Err(f) => finish(Err(f)),
    }
}

/// `verify-lemmas --seed N --trials M --out DIR`.
pub fn cmd_verify_lemmas(seed: u64, trials: usize, out: &Path, force_violation: bool) -> i32 {
    let run = || -> Result<(), Failure> {
        let report = run_lemma_suite(&SuiteOptions {
            seed,
            trials,
            force_violation,
        })?;
        let text = format!("seed={seed} trials={trials}\n{}", report.to_table());
        prepare_dir(out)?;
        write_file(out, "lemma_report.txt", &text)?;
        print!("{text}");
        if report.all_pass() {
            return Ok(());
        }
        let ce = report.counterexample.unwrap_or_default();
        write_file(out, "counterexample.txt", &ce)?;
        Err(Failure {
            code: EXIT_VIOLATION,
            msg: format!("inequality violated; counterexample in {}", out.join("counterexample.txt").display()),
        })
    };
    finish(run())
}

/// Absolute tolerance on reconstructed `u`.
pub const ORACLE_U_TOL: f64 = 5e-4;
/// Absolute tolerance on `(u_t, u_x)` at `t = 0`.
pub const ORACLE_TRACE_TOL_INITIAL: f64 = 1e-14;
/// Absolute tolerance on `(u_t, u_x)` for `t > 0`.
pub const ORACLE_TRACE_TOL: f64 = 1e-12;
/// Comparison times, truncated at `t_final`.
pub const ORACLE_TIMES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];

/// Error of the solver against the d'Alembert solution at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub t: f64,
    pub u_error: f64,
    pub worst_x: f64,
    pub ut_error: f64,
    pub ux_error: f64,
}

/// Undamped run of `cfg` compared with the reflected d'Alembert solution.
pub fn oracle_errors(cfg: &RunConfig) -> Result<Vec<OracleRow>, ConfigErrorOr> {
    let mut sim = cfg.sim_config()?;
    if !sim.damping.is_identically_zero() {
        return Err(ConfigErrorOr::Config("oracle comparison needs damping.preset = zero and no perturbation".into()));
    }
    let parity = match sim.boundary {
        BoundarySpec::Dirichlet => Parity::Odd,
        BoundarySpec::Neumann => Parity::Even,
        BoundarySpec::Dynamic { .. } => {
            return Err(ConfigErrorOr::Config("oracle comparison supports dirichlet and neumann walls".into()))
        }
    };
    let preset = cfg.initial;
    if parity == Parity::Odd && (preset.displacement(0.0).abs() > 1e-12 || preset.displacement(1.0).abs() > 1e-12) {
        return Err(ConfigErrorOr::Config(format!(
            "initial preset '{preset}' does not vanish at the walls"
        )));
    }
    let dx = sim.dt();
    let times: Vec<f64> = ORACLE_TIMES.iter().copied().filter(|&t| t <= cfg.t_final).collect();
    let steps: Vec<usize> = times.iter().map(|t| (t / dx).round() as usize).collect();
    sim.t_final = steps.last().copied().unwrap_or(0) as f64 * dx;
    sim.record_every = usize::MAX;

    let initial = preset.state(&sim.grid);
    let mut recon = WaveReconstructor::new(sim.boundary, preset.displacement(0.0), steps.clone());
    run_observed(&initial, &sim, &mut recon)?;

    let u0 = parity.extend(move |x| preset.displacement(x));
    let strain = parity.derivative().extend(move |x| preset.strain(x));
    let u1 = parity.extend(move |x| preset.velocity(x));
    let centers: Vec<f64> = sim.grid.centers().collect();
    recon
        .captured()
        .iter()
        .zip(&steps)
        .map(|(w, &k)| {
            let t = k as f64 * dx;
            let mut row = OracleRow {
                t,
                u_error: 0.0,
                worst_x: centers[0],
                ut_error: 0.0,
                ux_error: 0.0,
            };
            for (i, &x) in centers.iter().enumerate() {
                let u = dalembert_reference(&u0, &u1, None, t, x)?;
                let (ut, ux) = trace_derivatives_dalembert(&strain, &u1, None, t, x)?;
                let e = (w.u[i] - u).abs();
                if e > row.u_error {
                    row.u_error = e;
                    row.worst_x = x;
                }
                row.ut_error = row.ut_error.max((w.ut[i] - ut).abs());
                row.ux_error = row.ux_error.max((w.ux[i] - ux).abs());
            }
            Ok(row)
        })
        .collect()
}

/// Error type of [`oracle_errors`].
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigErrorOr {
    Config(String),
    Run(Error),
}

impl From<ConfigError> for ConfigErrorOr {
    fn from(e: ConfigError) -> Self {
        ConfigErrorOr::Config(e.to_string())
    }
}

impl From<Error> for ConfigErrorOr {
    fn from(e: Error) -> Self {
        ConfigErrorOr::Run(e)
    }
}

impl From<ConfigErrorOr> for Failure {
    fn from(e: ConfigErrorOr) -> Self {
        match e {
            ConfigErrorOr::Config(msg) => Failure {
                code: EXIT_CONFIG,
                msg: format!("config error: {msg}"),
            },
            ConfigErrorOr::Run(e) => e.into(),
        }
    }
}

/// `oracle-compare --config PATH --out DIR`.
pub fn cmd_oracle_compare(config: &Path, out: &Path) -> i32 {
    let run = || -> Result<(), Failure> {
        let cfg = RunConfig::load(config)?;
        let rows = oracle_errors(&cfg)?;
        let mut csv = String::from("t,max_u_error,worst_x,max_ut_error,max_ux_error\n");
        for r in &rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                decimal17(r.t),
                decimal17(r.u_error),
                decimal17(r.worst_x),
                decimal17(r.ut_error),
                decimal17(r.ux_error)
            );
        }
        prepare_dir(out)?;
        write_file(out, "oracle_errors.csv", &csv)?;
        for r in &rows {
            let trace_tol = if r.t == 0.0 { ORACLE_TRACE_TOL_INITIAL } else { ORACLE_TRACE_TOL };
            if r.u_error > ORACLE_U_TOL || r.ut_error > trace_tol || r.ux_error > trace_tol {
                return Err(Failure {
                    code: EXIT_ORACLE,
                    msg: format!(
                        "oracle tolerance exceeded at t={}, x={}: u error {:e}, trace errors {:e}, {:e}",
                        r.t, r.worst_x, r.u_error, r.ut_error, r.ux_error
                    ),
                });
            }
        }
        Ok(())
    };
    finish(run())
}

/// Initial presets compatible with the oracle for `boundary`.
pub fn oracle_presets(boundary: &BoundarySpec) -> Vec<InitialPreset> {
    let all = [
        InitialPreset::Standing,
        InitialPreset::Velocity,
        InitialPreset::Mixed,
        InitialPreset::Cosine,
        InitialPreset::MeanOffset,
    ];
    all.into_iter()
        .filter(|p| {
            *boundary != BoundarySpec::Dirichlet || (p.displacement(0.0).abs() < 1e-12 && p.displacement(1.0).abs() < 1e-12)
        })
        .collect()
}
