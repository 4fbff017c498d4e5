//! Evaluable test functions with exact (or flagged approximate) bounds on
//! the derivative.

use std::fmt;
use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::interval::Interval;
use crate::numerics::root::{find_root, RootConfig};
use crate::weights::ScalarFn;

/// Number of probe points used to validate derivative ranges.
pub const PROBE_POINTS: usize = 4096;

#[derive(Clone)]
pub enum Shape {
    /// Ascending coefficients c0 + c1 t + c2 t² + ...
    Polynomial(Vec<f64>),
    /// Continuous piecewise-affine interpolant through sorted knots.
    PiecewiseLinear(Vec<(f64, f64)>),
    Custom {
        f: ScalarFn,
        df: Option<ScalarFn>,
    },
}

/// A scalar function on an interval, with optional derivative and
/// derivative range (γ, Γ).
#[derive(Clone)]
pub struct FunctionSpec {
    shape: Shape,
    domain: Interval,
    derivative_range: Option<(f64, f64)>,
    range_exact: bool,
    descriptor: String,
    kinks: Vec<f64>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("descriptor", &self.descriptor)
            .field("domain", &self.domain)
            .field("derivative_range", &self.derivative_range)
            .finish()
    }
}

pub(crate) fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub(crate) fn differentiate(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let n = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
    &coeffs[..n]
}

/// Real roots of a polynomial of degree ≤ 2 inside the open interval.
fn low_degree_roots(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let c = trim(coeffs);
    let roots = match c.len() {
        0 | 1 => vec![],
        2 => vec![-c[0] / c[1]],
        3 => {
            let (c0, c1, c2) = (c[0], c[1], c[2]);
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc < 0.0 {
                vec![]
            } else {
                let q = -0.5 * (c1 + disc.sqrt().copysign(c1));
                let mut r = vec![q / c2];
                if q != 0.0 {
                    r.push(c0 / q);
                }
                r
            }
        }
        _ => unreachable!("degree > 2"),
    };
    roots.into_iter().filter(|&r| r > lo && r < hi).collect()
}

/// Sign changes of `g` on a dense grid, refined by Brent.
fn sampled_roots<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64) -> Vec<f64> {
    let grid = Interval::new(lo, hi).expect("valid interval").grid(PROBE_POINTS);
    let cfg = RootConfig {
        x_tol: 1e-15,
        f_tol: 1e-300,
        max_iter: 400,
    };
    let mut out = Vec::new();
    for pair in grid.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        let (gu, gv) = (g(u), g(v));
        if gu == 0.0 {
            out.push(u);
        } else if gu.signum() != gv.signum() && gv != 0.0 {
            if let Ok(r) = find_root(&g, u, v, &cfg) {
                out.push(r);
            }
        }
    }
    out.retain(|&r| r > lo && r < hi);
    out
}

/// Exact inf/sup of the derivative of a polynomial on `domain`.
pub fn polynomial_derivative_range(coeffs: &[f64], domain: Interval) -> (f64, f64) {
    let d1 = differentiate(coeffs);
    let d2 = differentiate(&d1);
    let (a, b) = (domain.a(), domain.b());
    let critical = if trim(&d2).len() <= 3 {
        low_degree_roots(&d2, a, b)
    } else {
        sampled_roots(|t| horner(&d2, t), a, b)
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in [a, b].into_iter().chain(critical) {
        let v = horner(&d1, t);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

impl FunctionSpec {
    /// Polynomial with ascending coefficients; γ and Γ are computed exactly.
    pub fn polynomial(coeffs: Vec<f64>, domain: Interval) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Malformed("polynomial needs finite coefficients".into()));
        }
        let range = polynomial_derivative_range(&coeffs, domain);
        let descriptor = format!(
            "poly:{}",
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(Self {
            shape: Shape::Polynomial(coeffs),
            domain,
            derivative_range: Some(range),
            range_exact: true,
            descriptor,
            kinks: vec![],
        })
    }

    /// Continuous piecewise-affine function through `knots`, which must
    /// start at `domain.a()`, end at `domain.b()` and increase strictly.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>, domain: Interval, descriptor: &str) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Malformed("piecewise-linear function needs two knots".into()));
        }
        if knots[0].0 != domain.a() || knots[knots.len() - 1].0 != domain.b() {
            return Err(Error::Malformed("knots must span the domain".into()));
        }
        if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) || knots.iter().any(|k| !k.1.is_finite()) {
            return Err(Error::Malformed("knot abscissae must increase strictly".into()));
        }
        let slopes = knots.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0));
        let (lo, hi) = slopes.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), s| (l.min(s), h.max(s)));
        let kinks = knots[1..knots.len() - 1].iter().map(|k| k.0).collect();
        Ok(Self {
            shape: Shape::PiecewiseLinear(knots),
            domain,
            derivative_range: Some((lo, hi)),
            range_exact: true,
            descriptor: descriptor.to_string(),
            kinks,
        })
    }

    /// Arbitrary function. When both `df` and `range` are supplied the
    /// range is checked against the derivative on a probe grid.
    pub fn custom(
        f: ScalarFn,
        df: Option<ScalarFn>,
        range: Option<(f64, f64)>,
        domain: Interval,
        descriptor: &str,
    ) -> Result<Self> {
        if let Some((g, big_g)) = range {
            if !(g <= big_g) {
                return param(format!("derivative range needs gamma <= Gamma, got ({g}, {big_g})"));
            }
            if let Some(df) = &df {
                let scale = g.abs().max(big_g.abs()).max(1.0);
                for t in domain.grid(PROBE_POINTS) {
                    let d = df(t);
                    if !(d >= g - 1e-12 * scale && d <= big_g + 1e-12 * scale) {
                        return param(format!(
                            "derivative {d} at t = {t} escapes the declared range [{g}, {big_g}]"
                        ));
                    }
                }
            }
        }
        Ok(Self {
            shape: Shape::Custom { f, df },
            domain,
            derivative_range: range,
            range_exact: range.is_some(),
            descriptor: descriptor.to_string(),
            kinks: vec![],
        })
    }

    /// Custom function whose derivative range is estimated by dense
    /// sampling of `df`; flagged as approximate.
    pub fn sampled(f: ScalarFn, df: ScalarFn, domain: Interval, descriptor: &str) -> Self {
        let (lo, hi) = domain
            .grid(PROBE_POINTS)
            .into_iter()
            .map(|t| df(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), d| (l.min(d), h.max(d)));
        Self {
            shape: Shape::Custom { f, df: Some(df) },
            domain,
            derivative_range: Some((lo, hi)),
            range_exact: false,
            descriptor: descriptor.to_string(),
            kinks: vec![],
        }
    }

    /// sin(k t) with its exact derivative range on `domain`.
    pub fn sine(k: f64, domain: Interval) -> Self {
        let f: ScalarFn = Arc::new(move |t: f64| (k * t).sin());
        let df: ScalarFn = Arc::new(move |t: f64| k * (k * t).cos());
        Self::sampled(f, df, domain, &format!("sin:{k}"))
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Interior points where the function is not differentiable.
    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn derivative_range(&self) -> Option<(f64, f64)> {
        self.derivative_range
    }

    pub fn range_is_exact(&self) -> bool {
        self.range_exact
    }

    /// ‖f′‖∞ from the derivative range.
    pub fn derivative_sup_norm(&self) -> Option<f64> {
        self.derivative_range.map(|(g, big_g)| g.abs().max(big_g.abs()))
    }

    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Polynomial(c) => Some(c),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Polynomial(c) => horner(c, t),
            Shape::PiecewiseLinear(knots) => {
                let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1);
                let ((x0, y0), (x1, y1)) = (knots[i - 1], knots[i]);
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
            Shape::Custom { f, .. } => f(t),
        }
    }

    pub fn has_derivative(&self) -> bool {
        !matches!(&self.shape, Shape::Custom { df: None, .. })
    }

    /// f′(t); one-sided from the right at kinks.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        match &self.shape {
            Shape::Polynomial(c) => Some(horner(&differentiate(c), t)),
            Shape::PiecewiseLinear(knots) => {
                let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1);
                let ((x0, y0), (x1, y1)) = (knots[i - 1], knots[i]);
                Some((y1 - y0) / (x1 - x0))
            }
            Shape::Custom { df, .. } => df.as_ref().map(|d| d(t)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_range() {
        let f = FunctionSpec::polynomial(vec![0.0, 1.0, 0.0, 0.0], Interval::unit()).unwrap();
        assert_eq!(f.derivative_range(), Some((1.0, 1.0)));
    }

    #[test]
    fn half_square_range() {
        let f = FunctionSpec::polynomial(vec![0.0, 0.0, 0.5, 0.0], Interval::unit()).unwrap();
        assert_eq!(f.derivative_range(), Some((0.0, 1.0)));
        assert_abs_diff_eq!(f.eval(0.4), 0.08, epsilon = 1e-16);
    }

    #[test]
    fn cube_on_symmetric_interval() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let f = FunctionSpec::polynomial(vec![0.0, 0.0, 0.0, 1.0], iv).unwrap();
        assert_eq!(f.derivative_range(), Some((0.0, 3.0)));
    }

    #[test]
    fn high_degree_uses_sampled_critical_points() {
        // f′ = cos-like quartic: f(t) = t⁵/5 − t³/3 ⇒ f′ = t⁴ − t², min −1/4 at ±1/√2.
        let iv = Interval::new(-1.2, 1.1).unwrap();
        let f = FunctionSpec::polynomial(vec![0.0, 0.0, 0.0, -1.0 / 3.0, 0.0, 0.2], iv).unwrap();
        let (lo, hi) = f.derivative_range().unwrap();
        assert_abs_diff_eq!(lo, -0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 1.2f64.powi(4) - 1.44, epsilon = 1e-14);
    }

    #[test]
    fn piecewise_linear_eval_and_slopes() {
        let f = FunctionSpec::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.25)], Interval::unit(), "w")
            .unwrap();
        assert_eq!(f.derivative_range(), Some((-0.5, 1.0)));
        assert_abs_diff_eq!(f.eval(0.25), 0.25, epsilon = 1e-16);
        assert_abs_diff_eq!(f.eval(0.75), 0.375, epsilon = 1e-16);
        assert_eq!(f.eval(1.0), 0.25);
        assert_eq!(f.derivative(0.5), Some(-0.5));
        assert_eq!(f.kinks(), &[0.5]);
    }

    #[test]
    fn custom_range_validation() {
        let f: ScalarFn = Arc::new(|t: f64| t * t);
        let df: ScalarFn = Arc::new(|t: f64| 2.0 * t);
        assert!(FunctionSpec::custom(f.clone(), Some(df.clone()), Some((0.0, 2.0)), Interval::unit(), "sq").is_ok());
        assert!(FunctionSpec::custom(f.clone(), Some(df), Some((0.0, 1.5)), Interval::unit(), "sq").is_err());
        assert!(FunctionSpec::custom(f, None, Some((1.0, 0.0)), Interval::unit(), "sq").is_err());
    }

    #[test]
    fn sine_range_is_flagged_approximate() {
        let f = FunctionSpec::sine(10.0, Interval::unit());
        assert!(!f.range_is_exact());
        let (lo, hi) = f.derivative_range().unwrap();
        assert!(lo < -9.99 && hi > 9.99);
    }
}
