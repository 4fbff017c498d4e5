use crate::error::{param, Error, Result};

/// Stopping rules for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            f_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Brent's method on a sign-changing bracket `[lo, hi]`.
///
/// Stops once `|g(t)| <= f_tol` or the bracket is narrower than `x_tol`.
/// Inverse quadratic / secant steps are taken only while they stay inside
/// the bracket and shrink it fast enough; otherwise the step is a bisection,
/// so the iteration count is bounded by the bisection count.
pub fn find_root<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, cfg: &RootConfig) -> Result<f64> {
    if !(cfg.x_tol > 0.0 && cfg.f_tol > 0.0) {
        return param("root tolerances must be positive");
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return param(format!("invalid root bracket [{lo}, {hi}]"));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa.abs() <= cfg.f_tol {
        return Ok(a);
    }
    if fb.abs() <= cfg.f_tol {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NoBracket {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..cfg.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.x_tol;
        let half = 0.5 * (c - b);
        if fb.abs() <= cfg.f_tol || half.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * half * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = g(b);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::{arcsine_cdf, normal_cdf};
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_root() {
        let r = find_root(|t| t - 0.75, 0.0, 1.0, &RootConfig::default()).unwrap();
        assert_abs_diff_eq!(r, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn arcsine_quantile() {
        let r = find_root(|t| arcsine_cdf(t) - 0.9, 0.0, 1.0, &RootConfig::default()).unwrap();
        let expected = (0.45 * std::f64::consts::PI).sin().powi(2);
        assert_abs_diff_eq!(r, expected, epsilon = 1e-11);
        assert_abs_diff_eq!(r, 0.975528, epsilon = 1e-6);
    }

    #[test]
    fn normal_median() {
        let r = find_root(|t| normal_cdf(t) - 0.5, -1.0, 1.0, &RootConfig::default()).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn no_bracket() {
        let err = find_root(|t| t * t + 1.0, -1.0, 1.0, &RootConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn halving_tolerance_moves_root_within_previous_tolerance() {
        let g = |t: f64| t.powi(3) - 0.3 * t - 0.1;
        let mut cfg = RootConfig {
            x_tol: 1e-4,
            f_tol: 1e-300,
            max_iter: 500,
        };
        let mut prev = find_root(g, 0.0, 1.0, &cfg).unwrap();
        for _ in 0..20 {
            let old_tol = cfg.x_tol;
            cfg.x_tol *= 0.5;
            let next = find_root(g, 0.0, 1.0, &cfg).unwrap();
            assert!((next - prev).abs() <= old_tol, "{next} vs {prev}");
            prev = next;
        }
    }
}
