//! Randomized verification suite with a plain-text report.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::monotonicity::{best_monotonicity_constant, gap_profile, monotonicity_gap};
use super::oscillation::{mean_oscillation_bound, oscillation_constant, SampledPath};
use super::trajectory::{characteristic_difference_check, dissipation_integrals, witness_point_search};
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::solver::{run_retained, Trajectory};
use crate::state::{BoundarySpec, DampingField, Grid, GridState, SimConfig};

/// Inputs of [`run_lemma_suite`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Scale of every randomized family.
    pub trials: usize,
    /// Replace the first mean-oscillation constant by half the observed
    /// worst ratio, to exercise the failure path.
    pub force_violation: bool,
}

/// Direction of a row's comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub lemma: String,
    pub p: f64,
    pub trials: usize,
    pub worst_ratio: f64,
    /// `None` when the row only requires a finite ratio.
    pub constant: Option<f64>,
    pub relation: Relation,
    pub pass: bool,
}

impl LemmaRow {
    fn new(lemma: impl Into<String>, p: f64, trials: usize, worst: f64, constant: Option<f64>, relation: Relation) -> Self {
        let pass = match (constant, relation) {
            (None, _) => worst.is_finite(),
            (Some(c), Relation::AtMost) => worst <= c,
            (Some(c), Relation::AtLeast) => worst >= c,
        };
        Self {
            lemma: lemma.into(),
            p,
            trials,
            worst_ratio: worst,
            constant,
            relation,
            pass,
        }
    }
}

/// Rows plus the input behind the first failure, if any.
#[derive(Debug, Clone, Default)]
pub struct LemmaReport {
    pub rows: Vec<LemmaRow>,
    pub counterexample: Option<String>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<28} {:>4} {:>8} {:>14} {:>4} {:>14} {}",
            "lemma", "p", "trials", "worst_ratio", "", "constant", "status"
        );
        for r in &self.rows {
            let rel = match r.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            };
            let constant = r.constant.map_or("finite".to_string(), |c| format!("{c:.6e}"));
            let _ = writeln!(
                out,
                "{:<28} {:>4} {:>8} {:>14.6e} {:>4} {:>14} {}",
                r.lemma,
                r.p,
                r.trials,
                r.worst_ratio,
                rel,
                constant,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

const P_VALUES: [f64; 3] = [1.5, 2.0, 3.0];
const WINDOWS: [(f64, f64); 2] = [(1.0, 0.5), (1.0, 0.1)];

/// Runs every family and collects the report.
pub fn run_lemma_suite(opts: &SuiteOptions) -> Result<LemmaReport> {
    let mut report = LemmaReport::default();
    let mut family = 0u32;
    let mut next_family = || {
        family += 1;
        family
    };
    let m = opts.trials.max(1);

    for p in P_VALUES {
        let (row, ce) = monotonicity_rows(opts.seed, next_family(), next_family(), m * 1000, p)?;
        report.rows.extend(row);
        if report.counterexample.is_none() {
            report.counterexample = ce;
        }
    }

    let mut forced = opts.force_violation;
    for p in P_VALUES {
        for (length, shift) in WINDOWS {
            for (kind, count) in [("steps", m), ("trig", (m / 10).max(1))] {
                let fam = next_family();
                let (mut row, worst) = oscillation_row(opts.seed, fam, count, p, length, shift, kind)?;
                if forced {
                    forced = false;
                    row = LemmaRow::new(row.lemma, p, row.trials, row.worst_ratio, Some(0.5 * row.worst_ratio), Relation::AtMost);
                }
                if !row.pass && report.counterexample.is_none() {
                    report.counterexample = Some(describe_path(&row, &worst, length, shift));
                }
                report.rows.push(row);
            }
        }
    }

    let runs = m.min(8);
    let corpus = solver_corpus(opts.seed, next_family(), runs)?;
    report.rows.extend(trajectory_rows(&corpus)?);
    Ok(report)
}

fn random_sign_magnitude(rng: &mut ChaCha8Rng) -> f64 {
    let mag = 10f64.powf(rng.random_range(-3.0..3.0));
    if rng.random::<bool>() {
        mag
    } else {
        -mag
    }
}

fn monotonicity_rows(seed: u64, fam_wide: u32, fam_box: u32, count: usize, p: f64) -> Result<(Vec<LemmaRow>, Option<String>)> {
    let sign_worst = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, fam_wide, i as u32);
            let (a, b) = (random_sign_magnitude(&mut rng), random_sign_magnitude(&mut rng));
            let d = (a - b).abs();
            (monotonicity_gap(a, b, p) / d.powf(p), a, b)
        })
        .filter(|r| r.0.is_finite())
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .unwrap_or((0.0, 0.0, 0.0));
    let c = best_monotonicity_constant(p)?;
    let box_worst = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, fam_box, i as u32);
            let (a, b): (f64, f64) = (rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
            let d = a - b;
            (if d == 0.0 { f64::INFINITY } else { monotonicity_gap(a, b, p) / gap_profile(d, p) }, a, b)
        })
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .unwrap_or((f64::INFINITY, 0.0, 0.0));
    let rows = vec![
        LemmaRow::new("monotonicity-sign", p, count, sign_worst.0, Some(0.0), Relation::AtLeast),
        // relative slack for rounding in the ratio itself
        LemmaRow::new("monotonicity-bound[-1,1]", p, count, box_worst.0, Some(c * (1.0 - 1e-12)), Relation::AtLeast),
    ];
    let ce = if !rows[0].pass {
        Some(format!("lemma=monotonicity-sign p={p}\nalpha={:e}\nbeta={:e}\n", sign_worst.1, sign_worst.2))
    } else if !rows[1].pass {
        Some(format!("lemma=monotonicity-bound p={p}\nalpha={:e}\nbeta={:e}\n", box_worst.1, box_worst.2))
    } else {
        None
    };
    Ok((rows, ce))
}

/// Random step function on `(0, span)` with cell width 1/200.
fn random_steps(rng: &mut ChaCha8Rng, span: f64) -> Result<SampledPath> {
    let h = 1.0 / 200.0;
    let cells = (span / h).round() as usize;
    let pieces = rng.random_range(1..=12);
    let mut cuts: Vec<usize> = (0..pieces - 1).map(|_| rng.random_range(1..cells)).collect();
    cuts.sort_unstable();
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    let mut values = Vec::with_capacity(cells);
    let mut level = scale * rng.random_range(-1.0..1.0);
    let mut next_cut = cuts.iter().peekable();
    for i in 0..cells {
        while next_cut.peek().is_some_and(|&&c| c == i) {
            next_cut.next();
            level = scale * rng.random_range(-1.0..1.0);
        }
        values.push(level);
    }
    SampledPath::new(values, h, super::Sampling::PiecewiseConstant)
}

/// Random trigonometric polynomial interpolated on nodes 1/100 apart.
fn random_trig(rng: &mut ChaCha8Rng, span: f64) -> Result<SampledPath> {
    let modes = rng.random_range(1..=6);
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|k| {
            let s = 1.0 / k as f64;
            (s * rng.random_range(-1.0..1.0), s * rng.random_range(-1.0..1.0))
        })
        .collect();
    let f = |x: f64| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = 2.0 * std::f64::consts::PI * (k + 1) as f64 * x;
                a * w.cos() + b * w.sin()
            })
            .sum::<f64>()
    };
    SampledPath::nodes(f, span, 1.0 / 100.0)
}

fn oscillation_row(
    seed: u64,
    fam: u32,
    count: usize,
    p: f64,
    length: f64,
    shift: f64,
    kind: &str,
) -> Result<(LemmaRow, SampledPath)> {
    let (constant, _) = oscillation_constant(length, shift, p);
    let results: Vec<(f64, SampledPath)> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(f64, SampledPath)> {
            let mut rng = trial_rng(seed, fam, i as u32);
            let u = if kind == "steps" {
                random_steps(&mut rng, length + shift)?
            } else {
                random_trig(&mut rng, length + shift)?
            };
            let ratio = match mean_oscillation_bound(&u, length, shift, p) {
                Ok(b) => b.ratio(),
                Err(Error::Violation { lhs, bound, .. }) => lhs * constant / bound,
                Err(e) => return Err(e),
            };
            Ok((ratio, u))
        })
        .collect::<Result<_>>()?;
    let (worst, path) = results
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one trial");
    let name = format!("mean-oscillation[{kind},l={shift}]");
    Ok((LemmaRow::new(name, p, count, worst, Some(constant), Relation::AtMost), path))
}

fn describe_path(row: &LemmaRow, u: &SampledPath, length: f64, shift: f64) -> String {
    let mut s = format!(
        "lemma={} p={} L={length} l={shift}\nratio={:e}\nconstant={:e}\nstep={}\nvalues=",
        row.lemma,
        row.p,
        row.worst_ratio,
        row.constant.unwrap_or(f64::NAN),
        u.step()
    );
    let vals: Vec<String> = u.values().iter().map(|v| format!("{v:e}")).collect();
    s.push_str(&vals.join(","));
    s.push('\n');
    s
}

struct CorpusRun {
    traj: Trajectory,
    damping: DampingField,
    x0: f64,
    eps0: f64,
}

const CORPUS_CELLS: usize = 100;
const CORPUS_T: f64 = 3.0;

fn solver_corpus(seed: u64, fam: u32, runs: usize) -> Result<Vec<CorpusRun>> {
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, fam, i as u32);
            let lambda = rng.random_range(0.5..5.0);
            let x0 = rng.random_range(0.3..0.7);
            let eps0 = rng.random_range(0.1..0.3);
            let damping = DampingField::indicator(lambda, x0, eps0)?;
            let boundary = if rng.random::<bool>() {
                BoundarySpec::Dirichlet
            } else {
                BoundarySpec::Neumann
            };
            let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let grid = Grid::new(CORPUS_CELLS)?;
            let pi = std::f64::consts::PI;
            let init = GridState::from_fns(
                &grid,
                |x| c[0] + c[1] * (pi * x).cos() + c[2] * (3.0 * pi * x).sin(),
                |x| c[0] + c[3] * (2.0 * pi * x).cos() - c[2] * x,
            );
            let cfg = SimConfig::new(grid, boundary, damping.clone(), CORPUS_T);
            let (_, traj) = run_retained(&init, &cfg)?;
            Ok(CorpusRun { traj, damping, x0, eps0 })
        })
        .collect()
}

fn trajectory_rows(corpus: &[CorpusRun]) -> Result<Vec<LemmaRow>> {
    let n = corpus.len();
    let mut rows = Vec::new();
    let c3 = best_monotonicity_constant(3.0)?;

    let mut identity = 0.0f64;
    let mut cubic = 0.0f64;
    let mut sub = 0.0f64;
    for run in corpus {
        let (lhs, m2) = dissipation_integrals(&run.traj, &run.damping, 2.0)?;
        identity = identity.max((lhs - m2).abs() / m2.max(f64::MIN_POSITIVE));
        let (lhs, m3) = dissipation_integrals(&run.traj, &run.damping, 3.0)?;
        cubic = cubic.max(lhs / m3);
        let (lhs, m) = dissipation_integrals(&run.traj, &run.damping, 1.5)?;
        sub = sub.max(lhs / (m + m.powf(2.0 / 1.5)));
    }
    rows.push(LemmaRow::new("dissipation-identity", 2.0, n, identity, Some(1e-13), Relation::AtMost));
    rows.push(LemmaRow::new("dissipation-bound", 3.0, n, cubic, Some(1.0 / c3), Relation::AtMost));
    rows.push(LemmaRow::new("dissipation-bound", 1.5, n, sub, None, Relation::AtMost));

    let dx = 1.0 / CORPUS_CELLS as f64;
    let zero = DampingField::zero();
    let mut transport = 0.0f64;
    let mut witness = 0.0f64;
    for run in corpus {
        // with a ≡ 0 the relation is pure transport
        let undamped = run.traj.states();
        let mut free = Trajectory::new();
        let mut s = undamped[0].clone();
        for k in 0..=CORPUS_CELLS / 2 {
            crate::solver::StepObserver::observe(&mut free, k, &s);
            s = crate::solver::transport_substep(&s, &BoundarySpec::Dirichlet);
        }
        for j in [0, 10, 40] {
            let r = characteristic_difference_check(&free, &zero, 0.0, (CORPUS_CELLS / 2) as f64 * dx, (j as f64 + 0.5) * dx)?;
            transport = transport.max(r);
        }
        let w = witness_point_search(&run.traj, run.x0, run.eps0, 2.0)?;
        if w.strip_integral > 0.0 {
            witness = witness.max(w.trace_integral * run.eps0 / w.strip_integral);
        }
    }
    rows.push(LemmaRow::new("characteristic[a=0]", 2.0, n, transport, Some(0.0), Relation::AtMost));
    rows.push(LemmaRow::new("witness-point", 2.0, n, witness, Some(1.0), Relation::AtMost));
    Ok(rows)
}
