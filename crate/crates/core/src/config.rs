//! Flat `key = value` run configuration.
//!
//! ```text
//! # required
//! n_cells = 400
//! t_final = 60
//! # optional, defaults shown
//! p = 2
//! record_every = 10
//! splitting = strang            # lie | strang
//! boundary.kind = dirichlet     # dirichlet | neumann | dynamic
//! boundary.kappa = 1            # required for dynamic
//! damping.preset = indicator    # zero | constant | indicator | smooth | table
//! damping.lambda = 1
//! damping.x0 = 0.5
//! damping.eps0 = 0.1
//! damping.table = a.csv         # for the table preset, relative to the config
//! perturbation.amplitude = 0    # b = amplitude sin(2πx) sin(t)
//! perturbation.alpha = 0.05     # admissible bound on |b|
//! initial.preset = mean-offset  # mean-offset | standing | velocity | mixed | cosine
//! fit.window = 24,60            # decay fit window; default is the last 60%
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::state::{
    make_boundary_dynamic, smooth_window, BoundarySpec, DampingField, DampingMetadata, DampingTable, Grid, GridState,
    SimConfig, Splitting,
};

/// Failure to read or interpret a configuration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("invalid value for '{key}': {msg}")]
    Invalid { key: String, msg: String },
}

type CResult<T> = std::result::Result<T, ConfigError>;

/// Damping coefficient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingPreset {
    Zero,
    Constant,
    Indicator,
    Smooth,
    Table,
}

impl FromStr for DampingPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "zero" => Self::Zero,
            "constant" => Self::Constant,
            "indicator" => Self::Indicator,
            "smooth" => Self::Smooth,
            "table" => Self::Table,
            _ => return Err(format!("unknown preset '{s}' (zero|constant|indicator|smooth|table)")),
        })
    }
}

/// Initial data families, given as wave data `(u0, u1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialPreset {
    /// `rho0 = xi0 = 1 + sin 2πx`, so `c0 = 1`.
    MeanOffset,
    /// `u0 = sin πx`, `u1 = 0`.
    Standing,
    /// `u0 = 0`, `u1 = sin πx`.
    Velocity,
    /// `u0 = sin πx`, `u1 = sin 2πx`.
    Mixed,
    /// `u0 = cos πx`, `u1 = 0`.
    Cosine,
}

impl FromStr for InitialPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "mean-offset" => Self::MeanOffset,
            "standing" => Self::Standing,
            "velocity" => Self::Velocity,
            "mixed" => Self::Mixed,
            "cosine" => Self::Cosine,
            _ => return Err(format!("unknown preset '{s}' (mean-offset|standing|velocity|mixed|cosine)")),
        })
    }
}

impl fmt::Display for InitialPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MeanOffset => "mean-offset",
            Self::Standing => "standing",
            Self::Velocity => "velocity",
            Self::Mixed => "mixed",
            Self::Cosine => "cosine",
        })
    }
}

impl InitialPreset {
    /// `u0(x)`.
    pub fn displacement(self, x: f64) -> f64 {
        match self {
            Self::MeanOffset => x + (1.0 - (2.0 * PI * x).cos()) / (2.0 * PI),
            Self::Standing | Self::Mixed => (PI * x).sin(),
            Self::Velocity => 0.0,
            Self::Cosine => (PI * x).cos(),
        }
    }

    /// `∂_x u0(x)`.
    pub fn strain(self, x: f64) -> f64 {
        match self {
            Self::MeanOffset => 1.0 + (2.0 * PI * x).sin(),
            Self::Standing | Self::Mixed => PI * (PI * x).cos(),
            Self::Velocity => 0.0,
            Self::Cosine => -PI * (PI * x).sin(),
        }
    }

    /// `u1(x)`.
    pub fn velocity(self, x: f64) -> f64 {
        match self {
            Self::Velocity => (PI * x).sin(),
            Self::Mixed => (2.0 * PI * x).sin(),
            _ => 0.0,
        }
    }

    /// Riemann data at cell centers.
    pub fn state(self, grid: &Grid) -> GridState {
        GridState::from_fns(grid, |x| self.strain(x) + self.velocity(x), |x| self.strain(x) - self.velocity(x))
    }
}

/// Parsed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_cells: usize,
    pub t_final: f64,
    pub p: f64,
    pub record_every: usize,
    pub splitting: Splitting,
    pub boundary_kind: String,
    pub kappa: Option<f64>,
    pub damping: DampingPreset,
    pub lambda: f64,
    pub x0: f64,
    pub eps0: f64,
    pub table: Option<PathBuf>,
    pub perturbation_amplitude: f64,
    pub alpha: f64,
    pub initial: InitialPreset,
    pub fit_window: Option<(f64, f64)>,
}

/// Keys a sweep may vary, with the configuration key each one sets.
pub const SWEEP_KEYS: [(&str, &str); 6] = [
    ("lambda", "damping.lambda"),
    ("eps0", "damping.eps0"),
    ("kappa", "boundary.kappa"),
    ("p", "p"),
    ("n_cells", "n_cells"),
    ("perturbation.amplitude", "perturbation.amplitude"),
];

fn invalid(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        msg: msg.into(),
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> CResult<T> {
    value
        .parse()
        .map_err(|_| invalid(key, format!("'{value}' is not a valid number")))
}

impl RunConfig {
    /// Reads `path`; relative table paths resolve against its directory.
    pub fn load(path: &Path) -> CResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base_dir: &Path) -> CResult<Self> {
        let mut n_cells = None;
        let mut t_final = None;
        let mut cfg = RunConfig {
            n_cells: 0,
            t_final: 0.0,
            p: 2.0,
            record_every: 10,
            splitting: Splitting::Strang,
            boundary_kind: "dirichlet".into(),
            kappa: None,
            damping: DampingPreset::Indicator,
            lambda: 1.0,
            x0: 0.5,
            eps0: 0.1,
            table: None,
            perturbation_amplitude: 0.0,
            alpha: 0.05,
            initial: InitialPreset::MeanOffset,
            fit_window: None,
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("empty value for '{key}'"),
                });
            }
            match key {
                "n_cells" => n_cells = Some(number(key, value)?),
                "t_final" => t_final = Some(number(key, value)?),
                "damping.table" => cfg.table = Some(base_dir.join(value)),
                _ => cfg.set(key, value).map_err(|e| match e {
                    ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { line, key },
                    other => other,
                })?,
            }
        }
        cfg.n_cells = n_cells.ok_or(ConfigError::Missing("n_cells"))?;
        cfg.t_final = t_final.ok_or(ConfigError::Missing("t_final"))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> CResult<()> {
        match key {
            "n_cells" => self.n_cells = number(key, value)?,
            "t_final" => self.t_final = number(key, value)?,
            "p" => self.p = number(key, value)?,
            "record_every" => self.record_every = number(key, value)?,
            "splitting" => self.splitting = value.parse().map_err(|e: crate::Error| invalid(key, e.to_string()))?,
            "boundary.kind" => match value {
                "dirichlet" | "neumann" | "dynamic" => self.boundary_kind = value.into(),
                _ => return Err(invalid(key, format!("unknown boundary '{value}' (dirichlet|neumann|dynamic)"))),
            },
            "boundary.kappa" => self.kappa = Some(number(key, value)?),
            "damping.preset" => self.damping = value.parse().map_err(|e: String| invalid(key, e))?,
            "damping.lambda" => self.lambda = number(key, value)?,
            "damping.x0" => self.x0 = number(key, value)?,
            "damping.eps0" => self.eps0 = number(key, value)?,
            "damping.table" => self.table = Some(PathBuf::from(value)),
            "perturbation.amplitude" => self.perturbation_amplitude = number(key, value)?,
            "perturbation.alpha" => self.alpha = number(key, value)?,
            "initial.preset" => self.initial = value.parse().map_err(|e: String| invalid(key, e))?,
            "fit.window" => {
                let (lo, hi) = value
                    .split_once(',')
                    .ok_or_else(|| invalid(key, "expected 'lo,hi'"))?;
                self.fit_window = Some((number(key, lo.trim())?, number(key, hi.trim())?));
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: 0,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Applies a sweep value for one of [`SWEEP_KEYS`].
    pub fn set_sweep(&mut self, vary: &str, value: &str) -> CResult<()> {
        let (_, key) = SWEEP_KEYS
            .iter()
            .find(|(name, _)| *name == vary)
            .ok_or_else(|| invalid("vary", format!("cannot sweep '{vary}'")))?;
        if *key == "boundary.kappa" && self.boundary_kind != "dynamic" {
            return Err(invalid("vary", "kappa sweeps need boundary.kind = dynamic"));
        }
        self.set(key, value)?;
        self.check()
    }

    fn check(&self) -> CResult<()> {
        if self.n_cells < 2 {
            return Err(invalid("n_cells", "need at least 2 cells"));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(invalid("t_final", "must be finite and non-negative"));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(invalid("p", "must lie in (1, inf)"));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every", "must be positive"));
        }
        if self.boundary_kind == "dynamic" && self.kappa.is_none() {
            return Err(ConfigError::Missing("boundary.kappa"));
        }
        if self.damping == DampingPreset::Table && self.table.is_none() {
            return Err(ConfigError::Missing("damping.table"));
        }
        if let Some((lo, hi)) = self.fit_window {
            if !(lo < hi) {
                return Err(invalid("fit.window", "need lo < hi"));
            }
        }
        Ok(())
    }

    pub fn boundary(&self) -> CResult<BoundarySpec> {
        match self.boundary_kind.as_str() {
            "neumann" => Ok(BoundarySpec::Neumann),
            "dynamic" => {
                let kappa = self.kappa.ok_or(ConfigError::Missing("boundary.kappa"))?;
                make_boundary_dynamic(kappa).map_err(|e| invalid("boundary.kappa", e.to_string()))
            }
            _ => Ok(BoundarySpec::Dirichlet),
        }
    }

    pub fn damping_field(&self) -> CResult<DampingField> {
        let bad = |key: &'static str| move |e: crate::Error| invalid(key, e.to_string());
        let field = match self.damping {
            DampingPreset::Zero => DampingField::zero(),
            DampingPreset::Constant => DampingField::constant(self.lambda).map_err(bad("damping.lambda"))?,
            DampingPreset::Indicator => {
                DampingField::indicator(self.lambda, self.x0, self.eps0).map_err(bad("damping"))?
            }
            DampingPreset::Smooth => {
                // the window is at least 1/2 on the strip
                let mut meta = DampingMetadata::new(0.5 * self.lambda, self.x0, self.eps0).map_err(bad("damping"))?;
                meta.sup_norm = Some(self.lambda);
                let (lambda, lo, hi, w) = (self.lambda, self.x0 - self.eps0, self.x0 + self.eps0, self.eps0 / 8.0);
                DampingField::from_fn(move |_, x| lambda * smooth_window(x, lo, hi, w)).with_metadata(meta)
            }
            DampingPreset::Table => {
                let path = self.table.as_ref().ok_or(ConfigError::Missing("damping.table"))?;
                DampingField::from_table(read_table(path)?)
            }
        };
        if self.perturbation_amplitude != 0.0 {
            let amp = self.perturbation_amplitude;
            return Ok(field.with_perturbation(move |t, x| amp * (2.0 * PI * x).sin() * t.sin(), amp.abs()));
        }
        Ok(field)
    }

    pub fn sim_config(&self) -> CResult<SimConfig> {
        let grid = Grid::new(self.n_cells).map_err(|e| invalid("n_cells", e.to_string()))?;
        let mut cfg = SimConfig::new(grid, self.boundary()?, self.damping_field()?, self.t_final)
            .with_p(self.p)
            .with_record_every(self.record_every)
            .with_splitting(self.splitting);
        cfg.alpha = self.alpha;
        cfg.validate().map_err(|e| invalid("config", e.to_string()))?;
        Ok(cfg)
    }
}

/// CSV damping table: one row per time, `t,a_0,...,a_{n-1}`; `#` lines and
/// a non-numeric header row are skipped.
pub fn read_table(path: &Path) -> CResult<DampingTable> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() >= 2 => {
                times.push(v[0]);
                rows.push(v[1..].to_vec());
            }
            Ok(_) => {
                return Err(invalid("damping.table", format!("line {}: need a time and at least one value", idx + 1)))
            }
            Err(_) if times.is_empty() => continue,
            Err(_) => return Err(invalid("damping.table", format!("line {}: not numeric", idx + 1))),
        }
    }
    DampingTable::new(times, rows).map_err(|e| invalid("damping.table", e.to_string()))
}
