//! Adaptive midpoint quadrature by interval trisection.
//!
//! Trisection keeps the parent midpoint as the midpoint of the middle child,
//! so each refinement costs two new evaluations. The error of the refined
//! sum is estimated as an eighth of its difference to the coarse one
//! (midpoint error scales with h²).

use crate::error::{Error, Result};

const MIN_DEPTH: u32 = 3;
const MAX_DEPTH: u32 = 50;

/// `∫_a^b f` to absolute tolerance `tol`.
pub fn adaptive_midpoint(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return adaptive_midpoint(f, b, a, tol).map(|v| -v);
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    refine(f, a, b, fm, (b - a) * fm, tol, 0)
}

/// As [`adaptive_midpoint`], splitting `[a, b]` at the given interior
/// points so that jumps located there are integrated exactly.
pub fn adaptive_midpoint_split(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    breaks: &[f64],
) -> Result<f64> {
    if a > b {
        return adaptive_midpoint_split(f, b, a, tol, breaks).map(|v| -v);
    }
    let mut knots = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b).collect();
    inner.sort_by(f64::total_cmp);
    knots.extend(inner);
    knots.push(b);
    let piece_tol = tol / ((knots.len() - 1) as f64).sqrt();
    knots
        .windows(2)
        .map(|w| adaptive_midpoint(f, w[0], w[1], piece_tol))
        .sum()
}

/// Integers strictly inside `(a, b)`.
pub fn integer_breaks(a: f64, b: f64) -> Vec<f64> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut k = lo.floor() + 1.0;
    let mut out = Vec::new();
    while k < hi {
        out.push(k);
        k += 1.0;
    }
    out
}

fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fm: f64, coarse: f64, tol: f64, depth: u32) -> Result<f64> {
    let h = (b - a) / 3.0;
    let fl = f(a + 0.5 * h);
    let fr = f(b - 0.5 * h);
    let fine = h * (fl + fm + fr);
    let estimate = (fine - coarse).abs() / 8.0;
    if depth >= MIN_DEPTH && estimate <= tol {
        return Ok(fine + (fine - coarse) / 8.0);
    }
    if depth >= MAX_DEPTH || !estimate.is_finite() {
        return Err(Error::Accuracy { lo: a, hi: b, estimate });
    }
    let child_tol = tol / 3f64.sqrt();
    Ok(refine(f, a, a + h, fl, h * fl, child_tol, depth + 1)?
        + refine(f, a + h, b - h, fm, h * fm, child_tol, depth + 1)?
        + refine(f, b - h, b, fr, h * fr, child_tol, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_integrands() {
        let v = adaptive_midpoint(&|x: f64| x.sin(), 0.0, PI, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let v = adaptive_midpoint(&|x: f64| (-x * x).exp(), -5.0, 5.0, 1e-10).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-9);
        let v = adaptive_midpoint(&|x: f64| x * x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn periodic_integrand_is_not_fooled() {
        // coarse samples of sin(6πx) on [0,1] all vanish
        let v = adaptive_midpoint(&|x: f64| (6.0 * PI * x).sin().powi(2), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn jump_integrand() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { -1.0 };
        let v = adaptive_midpoint_split(&f, 0.0, 1.0, 1e-10, &[0.3]).unwrap();
        assert!((v - (0.3 - 0.7)).abs() < 1e-9, "{v}");
    }

    #[test]
    fn integer_break_points() {
        assert_eq!(integer_breaks(-1.5, 1.0), vec![-1.0, 0.0]);
        assert_eq!(integer_breaks(2.0, 0.2), vec![1.0]);
        assert!(integer_breaks(0.1, 0.9).is_empty());
    }

    #[test]
    fn divergent_integrand_reports_accuracy_error() {
        let r = adaptive_midpoint(&|x: f64| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }
}
