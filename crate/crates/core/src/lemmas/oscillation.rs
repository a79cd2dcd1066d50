//! Mean oscillation controlled by shift differences:
//! `∫_0^L |u - ⨍u|^p ≤ C ∫_0^l ∫_0^L |u(x+s) - u(x)|^p dx ds`.

use crate::error::{domain, Error, Result};

/// How the samples of a [`SampledPath`] define a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// `values[i]` holds on `[i h, (i+1) h)`.
    PiecewiseConstant,
    /// `values[i]` is the value at `i h`, linear in between.
    PiecewiseLinear,
}

/// A function on `(0, span)` given by uniform samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    values: Vec<f64>,
    step: f64,
    sampling: Sampling,
}

impl SampledPath {
    pub fn new(values: Vec<f64>, step: f64, sampling: Sampling) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(domain(format!("step must be positive, got {step}")));
        }
        let min_len = match sampling {
            Sampling::PiecewiseConstant => 1,
            Sampling::PiecewiseLinear => 2,
        };
        if values.len() < min_len {
            return Err(domain("too few samples"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("sample {i} is not finite")));
        }
        Ok(Self { values, step, sampling })
    }

    /// Cell averages of `f` approximated by cell-center values.
    pub fn cells(f: impl Fn(f64) -> f64, span: f64, step: f64) -> Result<Self> {
        let n = (span / step).round() as usize;
        Self::new((0..n).map(|i| f((i as f64 + 0.5) * step)).collect(), step, Sampling::PiecewiseConstant)
    }

    /// Nodal interpolant of `f` on `[0, span]`.
    pub fn nodes(f: impl Fn(f64) -> f64, span: f64, step: f64) -> Result<Self> {
        let n = (span / step).round() as usize;
        Self::new((0..=n).map(|i| f(i as f64 * step)).collect(), step, Sampling::PiecewiseLinear)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    /// Length of the interval the samples cover.
    pub fn span(&self) -> f64 {
        match self.sampling {
            Sampling::PiecewiseConstant => self.values.len() as f64 * self.step,
            Sampling::PiecewiseLinear => (self.values.len() - 1) as f64 * self.step,
        }
    }

    fn cells_in(&self, length: f64, what: &str) -> Result<usize> {
        let k = length / self.step;
        let r = k.round();
        if (k - r).abs() > 1e-9 * k.max(1.0) {
            return Err(domain(format!("{what}={length} is not a multiple of the step {}", self.step)));
        }
        Ok(r as usize)
    }
}

/// Outcome of [`mean_oscillation_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationBound {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    /// Integer `n >= 2` with `2/n <= l/L`.
    pub n: u64,
}

impl OscillationBound {
    /// `lhs / rhs`, zero when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Constant `2^p n^(p+1) / L` with `n = max(2, ⌈2L/l⌉)`.
///
/// The `1/L` factor carries the unit-interval constant over to `(0, L)`:
/// the left side scales like `L`, the double integral like `L²`.
pub fn oscillation_constant(length: f64, shift: f64, p: f64) -> (f64, u64) {
    let n = ((2.0 * length / shift - 1e-9).ceil() as u64).max(2);
    (2f64.powf(p) * (n as f64).powf(p + 1.0) / length, n)
}

/// Both sides of the mean-oscillation inequality on `(0, L)` with shifts up
/// to `l`, and its constant. Fails with [`Error::Violation`] if the
/// inequality does not hold.
pub fn mean_oscillation_bound(u: &SampledPath, length: f64, shift: f64, p: f64) -> Result<OscillationBound> {
    if !(shift > 0.0 && shift < length) {
        return Err(domain(format!("need 0 < l < L, got l={shift}, L={length}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(domain(format!("p must lie in [1, inf), got {p}")));
    }
    let m = u.cells_in(length, "L")?;
    let q = u.cells_in(shift, "l")?;
    let cells = match u.sampling {
        Sampling::PiecewiseConstant => u.values.len(),
        Sampling::PiecewiseLinear => u.values.len() - 1,
    };
    if m + q > cells {
        return Err(domain(format!(
            "samples cover {} but L + l = {}",
            u.span(),
            length + shift
        )));
    }
    let (lhs, rhs) = match u.sampling {
        Sampling::PiecewiseConstant => constant_sides(&u.values, u.step, m, q, p),
        Sampling::PiecewiseLinear => linear_sides(&u.values, u.step, m, q, p),
    };
    let (constant, n) = oscillation_constant(length, shift, p);
    let out = OscillationBound { lhs, rhs, constant, n };
    if lhs > constant * rhs * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::Violation {
            lhs,
            bound: constant * rhs,
            context: format!("mean oscillation, p={p}, L={length}, l={shift}"),
        });
    }
    Ok(out)
}

fn pow_abs(v: f64, p: f64) -> f64 {
    if p == 2.0 {
        v * v
    } else {
        v.abs().powf(p)
    }
}

// For a step function the shifted integral F(s) is linear between multiples
// of h, so the trapezoid rule over integer shifts is exact.
fn constant_sides(u: &[f64], h: f64, m: usize, q: usize, p: f64) -> (f64, f64) {
    // offset by u[0] so constant paths give an exact zero
    let mean = u[0] + u[..m].iter().map(|v| v - u[0]).sum::<f64>() / m as f64;
    let lhs = h * u[..m].iter().map(|&v| pow_abs(v - mean, p)).sum::<f64>();
    let f = |j: usize| h * (0..m).map(|i| pow_abs(u[i + j] - u[i], p)).sum::<f64>();
    let mut rhs = 0.0;
    let mut prev = f(0);
    for j in 1..=q {
        let next = f(j);
        rhs += 0.5 * h * (prev + next);
        prev = next;
    }
    (lhs, rhs)
}

/// `∫_0^1 |v0 + (v1 - v0) x|^p dx` for one-signed endpoints.
fn segment_integral(v0: f64, v1: f64, p: f64) -> f64 {
    let (a, b) = (v0.abs(), v1.abs());
    if (a - b).abs() <= 1e-4 * a.max(b) {
        // mean of g(v) for v uniform on [a, b], to O(Δ⁴)
        let mid = 0.5 * (a + b);
        let d = b - a;
        return mid.powf(p) + if mid > 0.0 { p * (p - 1.0) / 24.0 * mid.powf(p - 2.0) * d * d } else { 0.0 };
    }
    (b.powf(p + 1.0) - a.powf(p + 1.0)) / ((p + 1.0) * (b - a))
}

/// `∫_0^1 |linear|^p`, split at the root when the sign changes.
fn linear_abs_pow(v0: f64, v1: f64, p: f64) -> f64 {
    if v0 * v1 >= 0.0 {
        return segment_integral(v0, v1, p);
    }
    let r = v0 / (v0 - v1);
    r * segment_integral(v0, 0.0, p) + (1.0 - r) * segment_integral(0.0, v1, p)
}

fn linear_sides(u: &[f64], h: f64, m: usize, q: usize, p: f64) -> (f64, f64) {
    let mean = u[0] + (0..m).map(|i| 0.5 * (u[i] + u[i + 1]) - u[0]).sum::<f64>() / m as f64;
    let lhs = h * (0..m).map(|i| linear_abs_pow(u[i] - mean, u[i + 1] - mean, p)).sum::<f64>();

    // Square (cell i) × (shift j) in local coordinates (a, b) ∈ [0,1]²:
    // u(x) = u_i + (u_{i+1} - u_i) a and u(x+s) is linear on either side
    // of the diagonal a + b = 1.
    let mut rhs = 0.0;
    for i in 0..m {
        let (x0, x1) = (u[i], u[i + 1]);
        for j in 0..q {
            let k = i + j;
            let (y0, y1, y2) = (u[k], u[k + 1], u[k + 2]);
            // lower triangle (0,0), (1,0), (0,1): u(x+s) = y0 + (y1-y0)(a+b)
            let lower = [y0 - x0, y1 - x1, y1 - x0];
            // upper triangle (1,0), (1,1), (0,1): u(x+s) = y1 + (y2-y1)(a+b-1)
            let upper = [y1 - x1, y2 - x1, y1 - x0];
            rhs += triangle_abs_pow(lower, 0.5, p) + triangle_abs_pow(upper, 0.5, p);
        }
    }
    (lhs, rhs * h * h)
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `∫_T |f|^p` for `f` affine with vertex values `f`, over a triangle of the
/// given area. The triangle is cut along `f = 0` so every piece has a
/// one-signed integrand.
fn triangle_abs_pow(f: [f64; 3], area: f64, p: f64) -> f64 {
    let pos = f.iter().filter(|&&v| v > 0.0).count();
    let neg = f.iter().filter(|&&v| v < 0.0).count();
    if pos == 0 || neg == 0 {
        return one_signed_triangle(f, area, p);
    }
    // lone vertex: the one whose sign differs from the other two
    let lone = if pos == 1 {
        f.iter().position(|&v| v > 0.0).unwrap()
    } else {
        f.iter().position(|&v| v < 0.0).unwrap()
    };
    let (o1, o2) = ((lone + 1) % 3, (lone + 2) % 3);
    // zero crossings on the two edges from the lone vertex, as fractions
    let t1 = f[lone] / (f[lone] - f[o1]);
    let t2 = f[lone] / (f[lone] - f[o2]);
    // areas of the pieces relative to the whole triangle
    let tip = t1 * t2;
    // triangle (A, o1, o2), A on the edge lone-o1
    let piece_a = 1.0 - t1;
    let piece_b = 1.0 - tip - piece_a;
    one_signed_triangle([f[lone], 0.0, 0.0], area * tip, p)
        + one_signed_triangle([0.0, f[o1], f[o2]], area * piece_a, p)
        + one_signed_triangle([0.0, f[o2], 0.0], area * piece_b, p)
}

/// Collapsing the triangle onto its smallest-|f| vertex, `|f|^p` is
/// integrated in closed form along each ray and by Gauss-Legendre across
/// the rays; exact when that vertex value is zero.
fn one_signed_triangle(f: [f64; 3], area: f64, p: f64) -> f64 {
    if area <= 0.0 {
        return 0.0;
    }
    let mut v = f.map(f64::abs);
    v.sort_by(f64::total_cmp);
    let [a, b1, b2] = v;
    if a == 0.0 {
        return 2.0 * area * segment_integral(b1, b2, p) / (p + 2.0);
    }
    let mut total = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let t = 0.5 * (x + 1.0);
        total += 0.5 * w * ray_integral(a, b1 + t * (b2 - b1), p);
    }
    2.0 * area * total
}

/// `∫_0^1 (a + s (b - a))^p s ds` for `a > 0`, `b >= 0`.
fn ray_integral(a: f64, b: f64, p: f64) -> f64 {
    let d = b - a;
    if d.abs() <= 0.5 * a {
        // binomial series in d/a
        let r = d / a;
        let (mut c, mut rk, mut sum) = (1.0, 1.0, 0.0);
        for k in 0..200 {
            let term = c * rk / (k as f64 + 2.0);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            c *= (p - k as f64) / (k as f64 + 1.0);
            rk *= r;
        }
        return a.powf(p) * sum;
    }
    ((b.powf(p + 2.0) - a.powf(p + 2.0)) / (p + 2.0) - a * (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)) / (d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_path_gives_zero_sides() {
        let u = SampledPath::cells(|_| 3.0, 1.5, 0.01).unwrap();
        let b = mean_oscillation_bound(&u, 1.0, 0.5, 2.0).unwrap();
        assert_eq!((b.lhs, b.rhs), (0.0, 0.0));
        assert_eq!(b.ratio(), 0.0);
    }

    #[test]
    fn identity_path_closed_form() {
        for h in [0.5, 0.01, 1.0 / 64.0] {
            let u = SampledPath::nodes(|x| x, 1.5, h).unwrap();
            let b = mean_oscillation_bound(&u, 1.0, 0.5, 2.0).unwrap();
            assert!((b.lhs - 1.0 / 12.0).abs() < 1e-10, "{}", b.lhs);
            assert!((b.rhs - 1.0 / 24.0).abs() < 1e-10, "{}", b.rhs);
            assert_eq!(b.n, 4);
            assert_eq!(b.constant, 256.0);
        }
    }

    #[test]
    fn identity_path_other_exponents() {
        // lhs = 2 (1/2)^(p+1)/(p+1), rhs = ∫_0^l s^p ds = l^(p+1)/(p+1)
        for p in [1.0, 1.5, 3.0] {
            let u = SampledPath::nodes(|x| x, 1.5, 0.01).unwrap();
            let b = mean_oscillation_bound(&u, 1.0, 0.5, p).unwrap();
            let exact = 2.0 * 0.5f64.powf(p + 1.0) / (p + 1.0);
            assert!((b.lhs - exact).abs() < 1e-10);
            assert!((b.rhs - exact / 2.0).abs() < 1e-10);
        }
    }

    /// Oracle by brute-force midpoint sums on a much finer grid.
    fn brute(u: &dyn Fn(f64) -> f64, length: f64, shift: f64, p: f64, k: usize) -> (f64, f64) {
        let hx = length / k as f64;
        let hs = shift / k as f64;
        let xs: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) * hx).collect();
        let mean = xs.iter().map(|&x| u(x)).sum::<f64>() / k as f64;
        let lhs = hx * xs.iter().map(|&x| (u(x) - mean).abs().powf(p)).sum::<f64>();
        let mut rhs = 0.0;
        for j in 0..k {
            let s = (j as f64 + 0.5) * hs;
            rhs += hs * hx * xs.iter().map(|&x| (u(x + s) - u(x)).abs().powf(p)).sum::<f64>();
        }
        (lhs, rhs)
    }

    #[test]
    fn linear_quadrature_matches_brute_force() {
        let vals = [0.0, 1.0, -0.5, 2.0, 0.25, -1.0, 0.5];
        let h = 0.25;
        let u = SampledPath::new(vals.to_vec(), h, Sampling::PiecewiseLinear).unwrap();
        let interp = |x: f64| {
            let i = ((x / h).floor() as usize).min(vals.len() - 2);
            let a = x / h - i as f64;
            vals[i] * (1.0 - a) + vals[i + 1] * a
        };
        for p in [1.5, 2.0, 3.0] {
            let b = mean_oscillation_bound(&u, 1.0, 0.5, p).unwrap();
            let (l, r) = brute(&interp, 1.0, 0.5, p, 1500);
            assert!((b.lhs - l).abs() < 1e-5 * l, "p={p}: {} vs {l}", b.lhs);
            assert!((b.rhs - r).abs() < 1e-5 * r, "p={p}: {} vs {r}", b.rhs);
        }
    }

    #[test]
    fn step_quadrature_matches_brute_force() {
        let vals = [1.0, -1.0, 0.5, 0.5, 2.0, -0.25, 0.0, 1.5];
        let h = 0.25;
        let u = SampledPath::new(vals.to_vec(), h, Sampling::PiecewiseConstant).unwrap();
        let step = |x: f64| vals[((x / h).floor() as usize).min(vals.len() - 1)];
        for p in [1.0, 2.0, 2.5] {
            let b = mean_oscillation_bound(&u, 1.0, 0.75, p).unwrap();
            let (l, r) = brute(&step, 1.0, 0.75, p, 1200);
            assert!((b.lhs - l).abs() < 1e-9, "{} vs {l}", b.lhs);
            assert!((b.rhs - r).abs() < 2e-3 * r, "{} vs {r}", b.rhs);
        }
    }

    #[test]
    fn triangle_splitting_is_exact_for_squares() {
        // ∫_T f² = area (f0² + f1² + f2² + f0 f1 + f1 f2 + f0 f2) / 6
        for f in [[0.0, 1.0, -1.0], [0.3, -0.7, 0.9], [0.2, 0.5, 0.45]] {
            let exact = 0.5 * (f[0] * f[0] + f[1] * f[1] + f[2] * f[2] + f[0] * f[1] + f[1] * f[2] + f[0] * f[2]) / 6.0;
            assert!((triangle_abs_pow(f, 0.5, 2.0) - exact).abs() < 1e-15);
        }
        // p = 1 with a sign change: exact piecewise-linear integral
        let v = triangle_abs_pow([1.0, -1.0, 0.0], 0.5, 1.0);
        assert!((v - 1.0 / 6.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn ray_integral_branches_agree() {
        for p in [1.0, 1.5, 2.0, 3.7] {
            // closed form at the series threshold, from both sides
            let a = 1.0;
            let lo = ray_integral(a, 1.5 - 1e-9, p);
            let hi = ray_integral(a, 1.5 + 1e-9, p);
            assert!((lo - hi).abs() < 1e-8, "p={p}");
            assert!((ray_integral(2.0, 2.0, p) - 2f64.powf(p) / 2.0).abs() < 1e-15);
        }
        // p = 1: ∫ (1 + s) s ds = 1/2 + 1/3
        assert!((ray_integral(1.0, 2.0, 1.0) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn scaling_in_length() {
        // u(x) = x on (0, 3) with L = 2, l = 1: lhs = 2/3, rhs = 2/3
        let u = SampledPath::nodes(|x| x, 3.0, 0.05).unwrap();
        let b = mean_oscillation_bound(&u, 2.0, 1.0, 2.0).unwrap();
        assert!((b.lhs - 2.0 / 3.0).abs() < 1e-10);
        assert!((b.rhs - 2.0 / 3.0).abs() < 1e-10);
        assert_eq!(b.n, 4);
        assert_eq!(b.constant, 128.0);
    }

    #[test]
    fn domain_errors() {
        let u = SampledPath::cells(|x| x, 1.5, 0.01).unwrap();
        assert!(mean_oscillation_bound(&u, 1.0, 1.0, 2.0).is_err());
        assert!(mean_oscillation_bound(&u, 1.0, 0.0, 2.0).is_err());
        assert!(mean_oscillation_bound(&u, 1.0, 0.5, 0.5).is_err());
        assert!(mean_oscillation_bound(&u, 1.2, 0.5, 2.0).is_err());
        assert!(mean_oscillation_bound(&u, 1.0, 0.505, 2.0).is_err());
        assert!(SampledPath::new(vec![1.0, f64::NAN], 0.1, Sampling::PiecewiseConstant).is_err());
        assert!(SampledPath::new(vec![1.0], 0.1, Sampling::PiecewiseLinear).is_err());
    }

    #[test]
    fn constant_choice() {
        assert_eq!(oscillation_constant(1.0, 0.5, 2.0).1, 4);
        assert_eq!(oscillation_constant(1.0, 0.1, 2.0).1, 20);
        assert_eq!(oscillation_constant(1.0, 0.9, 2.0).1, 3);
        assert_eq!(oscillation_constant(1.0, 0.99, 1.0).1, 3);
    }
}
