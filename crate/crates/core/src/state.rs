//! Domain types shared by the solver, the wave bridge and the diagnostics.
//!
//! The spatial domain is the unit interval, discretized into `n_cells` equal
//! cells. Wave speed is one, so the unit-CFL time step equals the cell width.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

/// Uniform cell-centered grid on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_cells: usize,
    dx: f64,
}

impl Grid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(domain(format!("n_cells must be at least 2, got {n_cells}")));
        }
        Ok(Self {
            n_cells,
            dx: 1.0 / n_cells as f64,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Center of cell `i`, `(i + 1/2) dx`.
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(move |i| self.center(i))
    }

    /// Index of the cell containing `x`, clamped to the grid.
    pub fn cell_of(&self, x: f64) -> usize {
        let i = (x * self.n_cells as f64).floor();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.n_cells - 1)
        }
    }
}

/// Sampled Riemann pair: `rho = u_x + u_t` (moves left), `xi = u_x - u_t`
/// (moves right).
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub rho: Vec<f64>,
    pub xi: Vec<f64>,
    pub t: f64,
}

impl GridState {
    pub fn new(rho: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if rho.len() != xi.len() {
            return Err(domain(format!(
                "rho has {} cells but xi has {}",
                rho.len(),
                xi.len()
            )));
        }
        Grid::new(rho.len())?;
        Ok(Self { rho, xi, t: 0.0 })
    }

    /// Samples `rho` and `xi` at the cell centers of `grid`.
    pub fn from_fns(grid: &Grid, rho: impl Fn(f64) -> f64, xi: impl Fn(f64) -> f64) -> Self {
        Self {
            rho: grid.centers().map(&rho).collect(),
            xi: grid.centers().map(&xi).collect(),
            t: 0.0,
        }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self {
            rho: vec![c; grid.n_cells()],
            xi: vec![c; grid.n_cells()],
            t: 0.0,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.rho.len()
    }

    pub fn grid(&self) -> Grid {
        Grid {
            n_cells: self.rho.len(),
            dx: 1.0 / self.rho.len() as f64,
        }
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.rho.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.rho
            .iter()
            .chain(&self.xi)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// First non-finite entry, as `(quantity, cell)`.
    pub fn first_non_finite(&self) -> Option<(&'static str, usize)> {
        if let Some(i) = self.rho.iter().position(|v| !v.is_finite()) {
            return Some(("rho", i));
        }
        self.xi.iter().position(|v| !v.is_finite()).map(|i| ("xi", i))
    }
}

/// Pointwise space-time function `(t, x) -> value`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Support metadata of a damping coefficient: `a >= lambda` on the strip
/// `(x0 - eps0, x0 + eps0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingMetadata {
    pub lambda: f64,
    pub x0: f64,
    pub eps0: f64,
    pub sup_norm: Option<f64>,
}

impl DampingMetadata {
    pub fn new(lambda: f64, x0: f64, eps0: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain(format!("lambda must be positive, got {lambda}")));
        }
        if !(eps0 > 0.0) {
            return Err(domain(format!("eps0 must be positive, got {eps0}")));
        }
        if !(x0 - eps0 >= 0.0 && x0 + eps0 <= 1.0) {
            return Err(domain(format!(
                "strip ({}, {}) must lie inside (0, 1)",
                x0 - eps0,
                x0 + eps0
            )));
        }
        Ok(Self {
            lambda,
            x0,
            eps0,
            sup_norm: None,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.x0 - self.eps0 && x < self.x0 + self.eps0
    }
}

#[derive(Clone)]
struct Perturbation {
    eval: SpaceTimeFn,
    sup_norm: f64,
}

/// Damping coefficient `a(t, x)` with an optional sign-indefinite
/// perturbation `b(t, x)`.
///
/// The relaxation rate seen by the solver is `a/2 + b`.
#[derive(Clone)]
pub struct DampingField {
    eval: SpaceTimeFn,
    zero: bool,
    metadata: Option<DampingMetadata>,
    perturbation: Option<Perturbation>,
}

impl fmt::Debug for DampingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DampingField")
            .field("zero", &self.zero)
            .field("metadata", &self.metadata)
            .field(
                "perturbation_sup_norm",
                &self.perturbation.as_ref().map(|p| p.sup_norm),
            )
            .finish()
    }
}

impl DampingField {
    /// `a ≡ 0`.
    pub fn zero() -> Self {
        Self {
            eval: Arc::new(|_, _| 0.0),
            zero: true,
            metadata: None,
            perturbation: None,
        }
    }

    /// `a ≡ lambda` on the whole interval.
    pub fn constant(lambda: f64) -> Result<Self> {
        let mut meta = DampingMetadata::new(lambda, 0.5, 0.5)?;
        meta.sup_norm = Some(lambda);
        Ok(Self {
            eval: Arc::new(move |_, _| lambda),
            zero: false,
            metadata: Some(meta),
            perturbation: None,
        })
    }

    /// `a = lambda` on `(x0 - eps0, x0 + eps0)`, zero elsewhere.
    pub fn indicator(lambda: f64, x0: f64, eps0: f64) -> Result<Self> {
        let mut meta = DampingMetadata::new(lambda, x0, eps0)?;
        meta.sup_norm = Some(lambda);
        Ok(Self {
            eval: Arc::new(move |_, x| if meta.contains(x) { lambda } else { 0.0 }),
            zero: false,
            metadata: Some(meta),
            perturbation: None,
        })
    }

    /// Arbitrary closure, without support metadata.
    pub fn from_fn(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            zero: false,
            metadata: None,
            perturbation: None,
        }
    }

    /// Sampled space-time table with nearest-time lookup.
    pub fn from_table(table: DampingTable) -> Self {
        Self::from_fn(move |t, x| table.lookup(t, x))
    }

    pub fn with_metadata(mut self, metadata: DampingMetadata) -> Self {
        self.metadata = Some(metadata);
        self
    }

    /// Adds the perturbation `b`, with declared bound `|b| <= sup_norm`.
    pub fn with_perturbation(
        mut self,
        b: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        sup_norm: f64,
    ) -> Self {
        self.perturbation = Some(Perturbation {
            eval: Arc::new(b),
            sup_norm,
        });
        self
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        (self.eval)(t, x)
    }

    pub fn perturbation(&self, t: f64, x: f64) -> f64 {
        self.perturbation.as_ref().map_or(0.0, |p| (p.eval)(t, x))
    }

    /// Local relaxation rate `q = a/2 + b`.
    pub fn rate(&self, t: f64, x: f64) -> f64 {
        0.5 * self.eval(t, x) + self.perturbation(t, x)
    }

    pub fn metadata(&self) -> Option<&DampingMetadata> {
        self.metadata.as_ref()
    }

    pub fn has_perturbation(&self) -> bool {
        self.perturbation.is_some()
    }

    pub fn perturbation_sup_norm(&self) -> Option<f64> {
        self.perturbation.as_ref().map(|p| p.sup_norm)
    }

    /// True when `a ≡ 0` and there is no perturbation.
    pub fn is_identically_zero(&self) -> bool {
        self.zero && self.perturbation.is_none()
    }

    /// Samples the relaxation rate `a/2 + b` at cell centers.
    pub fn sample_rate(&self, grid: &Grid, t: f64) -> Result<Vec<f64>> {
        grid.centers()
            .map(|x| {
                let q = self.rate(t, x);
                if q.is_finite() {
                    Ok(q)
                } else {
                    Err(Error::Evaluation { t, x, value: q })
                }
            })
            .collect()
    }

    /// Samples `a` (and `b`) on `grid` at the given times and reports
    /// violations of the declared hypotheses.
    pub fn validate(&self, grid: &Grid, times: &[f64], alpha: f64) -> Vec<String> {
        let mut warnings = Vec::new();
        let mut negative = None;
        let mut weak_strip = None;
        let mut over_sup = None;
        for &t in times {
            for x in grid.centers() {
                let a = self.eval(t, x);
                if a < 0.0 && negative.is_none() {
                    negative = Some((t, x, a));
                }
                if let Some(meta) = &self.metadata {
                    if meta.contains(x) && a < meta.lambda && weak_strip.is_none() {
                        weak_strip = Some((t, x, a));
                    }
                    if let Some(sup) = meta.sup_norm {
                        if a.abs() > sup && over_sup.is_none() {
                            over_sup = Some((t, x, a));
                        }
                    }
                }
            }
        }
        if let Some((t, x, a)) = negative {
            warnings.push(format!(
                "damping is negative (a={a}) at t={t}, x={x}; use the perturbation slot for sign-indefinite terms"
            ));
        }
        if let Some((t, x, a)) = weak_strip {
            warnings.push(format!(
                "damping a={a} falls below lambda inside the strip at t={t}, x={x}"
            ));
        }
        if let Some((t, x, a)) = over_sup {
            warnings.push(format!("damping |a|={} exceeds declared sup norm at t={t}, x={x}", a.abs()));
        }
        if let Some(p) = &self.perturbation {
            if p.sup_norm > alpha {
                warnings.push(format!(
                    "perturbation sup norm {} exceeds the alpha threshold {alpha}",
                    p.sup_norm
                ));
            }
        }
        warnings
    }
}

/// Space-time table of damping values on cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingTable {
    times: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl DampingTable {
    /// `rows[k]` holds cell values at `times[k]`; times must increase.
    pub fn new(times: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if times.is_empty() || times.len() != rows.len() {
            return Err(domain("damping table needs one row per time and at least one row"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("damping table times must be strictly increasing"));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(domain("damping table rows must share a non-zero length"));
        }
        Ok(Self { times, rows })
    }

    pub fn n_cells(&self) -> usize {
        self.rows[0].len()
    }

    pub fn lookup(&self, t: f64, x: f64) -> f64 {
        let k = match self.times.binary_search_by(|s| s.total_cmp(&t)) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) if k == self.times.len() => k - 1,
            Err(k) => {
                if t - self.times[k - 1] <= self.times[k] - t {
                    k - 1
                } else {
                    k
                }
            }
        };
        let row = &self.rows[k];
        let n = row.len();
        let i = ((x * n as f64).floor().max(0.0) as usize).min(n - 1);
        row[i]
    }
}

/// Boundary closure for the incoming characteristics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundarySpec {
    /// `rho = xi` at both walls (`u = 0`).
    Dirichlet,
    /// `rho = -xi` at both walls (`u_x = 0`).
    Neumann,
    /// `xi(t,0) = c0 rho(t,0)`, `rho(t,1) = c1 xi(t,1)`.
    Dynamic { kappa: f64, c0: f64, c1: f64 },
}

impl BoundarySpec {
    /// Reflection coefficients `(left, right)` applied to the outgoing traces.
    pub fn coefficients(&self) -> (f64, f64) {
        match *self {
            BoundarySpec::Dirichlet => (1.0, 1.0),
            BoundarySpec::Neumann => (-1.0, -1.0),
            BoundarySpec::Dynamic { c0, c1, .. } => (c0, c1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundarySpec::Dirichlet => "dirichlet",
            BoundarySpec::Neumann => "neumann",
            BoundarySpec::Dynamic { .. } => "dynamic",
        }
    }
}

/// Dynamic boundary with `c0 = c1 = (kappa - 1)/(kappa + 1)`.
pub fn make_boundary_dynamic(kappa: f64) -> Result<BoundarySpec> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(domain(format!("kappa must be positive and finite, got {kappa}")));
    }
    let c = (kappa - 1.0) / (kappa + 1.0);
    Ok(BoundarySpec::Dynamic { kappa, c0: c, c1: c })
}

/// Operator splitting used to combine transport and relaxation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Splitting {
    Lie,
    #[default]
    Strang,
}

impl std::str::FromStr for Splitting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lie" => Ok(Splitting::Lie),
            "strang" => Ok(Splitting::Strang),
            other => Err(domain(format!("unknown splitting '{other}' (lie|strang)"))),
        }
    }
}

/// Everything needed to run one simulation.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub grid: Grid,
    pub boundary: BoundarySpec,
    pub damping: DampingField,
    pub t_final: f64,
    /// Exponent of the L^p diagnostics.
    pub p: f64,
    /// Steps between recorded diagnostic samples.
    pub record_every: usize,
    pub splitting: Splitting,
    /// Perturbation bound above which a warning is raised.
    pub alpha: f64,
}

impl SimConfig {
    pub fn new(grid: Grid, boundary: BoundarySpec, damping: DampingField, t_final: f64) -> Self {
        Self {
            grid,
            boundary,
            damping,
            t_final,
            p: 2.0,
            record_every: 1,
            splitting: Splitting::Strang,
            alpha: 0.05,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn with_splitting(mut self, splitting: Splitting) -> Self {
        self.splitting = splitting;
        self
    }

    /// Unit CFL: `dt = dx`.
    pub fn dt(&self) -> f64 {
        self.grid.dx()
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt()).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(domain(format!("t_final must be finite and >= 0, got {}", self.t_final)));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(domain(format!("p must lie in (1, inf), got {}", self.p)));
        }
        if self.record_every == 0 {
            return Err(domain("record_every must be positive"));
        }
        if let BoundarySpec::Dynamic { c0, c1, .. } = self.boundary {
            if !(c0.abs() < 1.0 && c1.abs() < 1.0) {
                return Err(domain(format!("dynamic coefficients must lie in (-1, 1), got {c0}, {c1}")));
            }
        }
        Ok(())
    }
}

/// Samples `f(t, ·)` at the cell centers of `grid`.
pub fn sample_field(f: &DampingField, grid: &Grid, t: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(domain(format!("sampling time must be >= 0, got {t}")));
    }
    grid.centers()
        .map(|x| {
            let v = f.eval(t, x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation { t, x, value: v })
            }
        })
        .collect()
}

/// Smooth approximation of the indicator of `(lo, hi)` with transition width
/// `width`.
pub fn smooth_window(x: f64, lo: f64, hi: f64, width: f64) -> f64 {
    0.5 * (((x - lo) / width).tanh() - ((x - hi) / width).tanh())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynamic_coefficients() {
        for (kappa, c) in [(1.0, 0.0), (3.0, 0.5), (1.0 / 3.0, -0.5)] {
            match make_boundary_dynamic(kappa).unwrap() {
                BoundarySpec::Dynamic { c0, c1, .. } => {
                    assert!((c0 - c).abs() < 1e-15);
                    assert_eq!(c0, c1);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(make_boundary_dynamic(0.0).is_err());
        assert!(make_boundary_dynamic(-2.0).is_err());
    }

    #[test]
    fn dynamic_coefficient_range() {
        for kappa in [1e-9, 1e-3, 0.5, 1.0, 7.0, 1e6, 1e12] {
            let (c0, _) = make_boundary_dynamic(kappa).unwrap().coefficients();
            assert!(c0.abs() < 1.0, "kappa={kappa} gave c0={c0}");
        }
    }

    #[test]
    fn grid_geometry() {
        assert!(Grid::new(1).is_err());
        for n in [2, 3, 7, 10, 1000, 4096] {
            let g = Grid::new(n).unwrap();
            assert!((g.dx() * n as f64 - 1.0).abs() <= 4.0 * f64::EPSILON);
            let c: Vec<f64> = g.centers().collect();
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            assert!(c[0] > 0.0 && c[n - 1] < 1.0);
        }
    }

    #[test]
    fn sample_zero_field() {
        let g = Grid::new(8).unwrap();
        assert_eq!(sample_field(&DampingField::zero(), &g, 1.0).unwrap(), vec![0.0; 8]);
    }

    #[test]
    fn sample_indicator() {
        let g = Grid::new(10).unwrap();
        let a = DampingField::indicator(1.0, 0.5, 0.1).unwrap();
        let v = sample_field(&a, &g, 0.0).unwrap();
        let expected: Vec<f64> = g
            .centers()
            .map(|x| if x > 0.4 && x < 0.6 { 1.0 } else { 0.0 })
            .collect();
        assert_eq!(v, expected);
        assert_eq!(v.iter().filter(|&&a| a == 1.0).count(), 2);
    }

    #[test]
    fn sample_linear_field() {
        let g = Grid::new(4).unwrap();
        let a = DampingField::from_fn(|_, x| x);
        assert_eq!(sample_field(&a, &g, 0.0).unwrap(), vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn sample_rejects_non_finite() {
        let g = Grid::new(4).unwrap();
        let a = DampingField::from_fn(|_, x| if x > 0.5 { f64::NAN } else { 1.0 });
        match sample_field(&a, &g, 0.25) {
            Err(Error::Evaluation { t, x, .. }) => {
                assert_eq!(t, 0.25);
                assert_eq!(x, 0.625);
            }
            other => panic!("expected evaluation error, got {other:?}"),
        }
        assert!(sample_field(&DampingField::zero(), &g, -1.0).is_err());
    }

    #[test]
    fn table_nearest_time() {
        let table = DampingTable::new(vec![0.0, 1.0], vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let a = DampingField::from_table(table);
        assert_eq!(a.eval(0.4, 0.25), 1.0);
        assert_eq!(a.eval(0.6, 0.75), 4.0);
        assert_eq!(a.eval(10.0, 0.1), 3.0);
        assert_eq!(a.eval(-1.0, 0.9), 2.0);
    }

    #[test]
    fn validation_flags_negative_damping() {
        let g = Grid::new(10).unwrap();
        let a = DampingField::from_fn(|_, x| x - 0.5);
        let w = a.validate(&g, &[0.0], 0.05);
        assert!(w.iter().any(|m| m.contains("negative")));
        let ok = DampingField::indicator(1.0, 0.5, 0.1).unwrap();
        assert!(ok.validate(&g, &[0.0, 1.0], 0.05).is_empty());
        let big_b = ok.with_perturbation(|_, _| 0.2, 0.2);
        assert!(big_b.validate(&g, &[0.0], 0.05).iter().any(|m| m.contains("alpha")));
    }
}
