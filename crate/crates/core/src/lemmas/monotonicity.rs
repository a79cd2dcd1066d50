//! The pointwise monotonicity gap behind the dissipation functional.

use crate::diagnostics::{dissipation_integrand, signed_pow};
use crate::error::{domain, Result};

/// `(α - β)(α|α|^(p-2) - β|β|^(p-2))`.
pub fn monotonicity_gap(alpha: f64, beta: f64, p: f64) -> f64 {
    if p == 2.0 {
        return dissipation_integrand(alpha, beta, p);
    }
    (alpha - beta) * (signed_pow(alpha, p - 1.0) - signed_pow(beta, p - 1.0))
}

/// Comparison profile: `|d|^p` for `p >= 2`, `min(|d|^p, d²)` below.
pub fn gap_profile(d: f64, p: f64) -> f64 {
    let a = d.abs().powf(p);
    if p >= 2.0 {
        a
    } else {
        a.min(d * d)
    }
}

/// `gap / profile` at `(α, β)`; `None` when `α = β`.
pub fn gap_ratio(alpha: f64, beta: f64, p: f64) -> Option<f64> {
    let d = alpha - beta;
    (d != 0.0).then(|| monotonicity_gap(alpha, beta, p) / gap_profile(d, p))
}

const BETA_SAMPLES: usize = 20001;

/// Largest `C_p` with `gap(α, β) >= C_p · profile(α - β)` on `[-1, 1]²`.
///
/// Both sides scale so that `α = 1`, `β ∈ [-1, 1)` is the worst case; the
/// minimum over a uniform β grid is polished by golden-section search, and
/// for `p < 2` compared against the limit `p - 1` as `β -> 1`.
///
/// For `1 < p < 2` no such constant exists on all of ℝ²: with `α = R`,
/// `β = R - 1` the gap behaves like `(p - 1) R^(p-2) -> 0`.
pub fn best_monotonicity_constant(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(domain(format!("p must lie in (1, inf), got {p}")));
    }
    let f = |beta: f64| gap_ratio(1.0, beta, p).unwrap_or(f64::INFINITY);
    let h = 2.0 / (BETA_SAMPLES - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..BETA_SAMPLES - 1 {
        let v = f(-1.0 + i as f64 * h);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    if best_i > 0 {
        let c = -1.0 + best_i as f64 * h;
        best = best.min(golden_min(&f, c - h, (c + h).min(1.0 - 1e-12)));
    }
    if p < 2.0 {
        best = best.min(p - 1.0);
    }
    Ok(best)
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain minimum over an `m × m` grid of `[-1, 1]²`.
    fn grid_constant(p: f64, m: usize) -> f64 {
        let h = 2.0 / (m - 1) as f64;
        let mut best = f64::INFINITY;
        for i in 0..m {
            for j in 0..m {
                let (a, b) = (-1.0 + i as f64 * h, -1.0 + j as f64 * h);
                if let Some(r) = gap_ratio(a, b, p) {
                    best = best.min(r);
                }
            }
        }
        best
    }

    #[test]
    fn p2_identity_and_symmetric_pairs() {
        assert_eq!(monotonicity_gap(1.0, 0.0, 2.0), 1.0);
        for p in [1.3, 2.0, 3.0, 4.5] {
            let a: f64 = 0.7;
            let ratio = monotonicity_gap(a, -a, p) / (2.0 * a).abs().powf(p);
            assert!((ratio - 4.0 / 2f64.powf(p)).abs() < 1e-14);
        }
    }

    #[test]
    fn gap_is_nonnegative() {
        for p in [1.1, 1.5, 2.0, 3.0, 7.0] {
            for a in [-3.0, -1.0, -1e-3, 0.0, 0.2, 5.0] {
                for b in [-2.0, -0.5, 0.0, 1e-4, 0.3, 4.0] {
                    assert!(monotonicity_gap(a, b, p) >= 0.0, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn best_constant_matches_grid_oracle() {
        for p in [2.0, 2.5, 3.0, 4.0] {
            let c = best_monotonicity_constant(p).unwrap();
            let oracle = grid_constant(p, 2001);
            assert!((c - oracle).abs() < 1e-6 * oracle.max(1.0), "p={p}: {c} vs {oracle}");
        }
        assert!((best_monotonicity_constant(3.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((best_monotonicity_constant(2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sub_quadratic_constant_below_grid_minimum() {
        for p in [1.2, 1.5, 1.8] {
            let c = best_monotonicity_constant(p).unwrap();
            let oracle = grid_constant(p, 2001);
            assert!(c <= oracle + 1e-12);
            assert!(c > 0.0 && c <= p - 1.0);
        }
    }

    #[test]
    fn sub_quadratic_bound_fails_off_the_unit_box() {
        let p = 1.5;
        let c = best_monotonicity_constant(p).unwrap();
        let r = 1e8;
        assert!(gap_ratio(r, r - 1.0, p).unwrap() < 1e-3 * c);
    }

    #[test]
    fn invalid_p() {
        assert!(best_monotonicity_constant(1.0).is_err());
        assert!(best_monotonicity_constant(f64::INFINITY).is_err());
    }
}
