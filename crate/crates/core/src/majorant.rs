//! Modulus of continuity on a uniform grid, its least concave majorant,
//! and the bounds on the weighted functional expressed through them.

use std::collections::VecDeque;

use crate::error::{param, Error, Result};
use crate::function::{FunctionSpec, PROBE_POINTS};
use crate::interval::Interval;
use crate::weighted::KernelPoint;
use crate::weights::Weight;

/// Default modulus grid size.
pub const DEFAULT_GRID: usize = 1025;
/// Largest grid the refinement loop will build (2²⁰ + 1 points).
pub const MAX_GRID: usize = (1 << 20) + 1;
/// Doubling the grid must move ω̃ by less than this.
pub const REFINE_TOL: f64 = 1e-3;

const ALL_LAGS_LIMIT: usize = 8193;
const SAMPLED_LAGS: usize = 4096;

/// Piecewise-linear, concave, nondecreasing curve through `(s, value)` knots
/// starting at (0, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantCurve {
    knots: Vec<(f64, f64)>,
}

impl MajorantCurve {
    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Right end of the curve's domain.
    pub fn span(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        eval_majorant(self, t)
    }

    /// Value at `t`, extended as a constant beyond the last knot.
    pub fn eval_extended(&self, t: f64) -> f64 {
        eval_majorant(self, t.clamp(0.0, self.span())).unwrap_or(f64::NAN)
    }

    /// Concave, nondecreasing and zero at zero, up to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        if self.knots[0] != (0.0, 0.0) {
            return false;
        }
        let slopes: Vec<f64> = self
            .knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        slopes.iter().all(|&s| s >= -tol) && slopes.windows(2).all(|p| p[1] <= p[0] + tol)
    }
}

/// ω on the uniform grid of `n_grid` points: max |f(u) − f(v)| over grid
/// pairs with |u − v| ≤ s.
pub fn modulus(f: &FunctionSpec, interval: Interval, n_grid: usize, s: f64) -> Result<f64> {
    if n_grid < 2 {
        return param(format!("modulus grid needs at least 2 points, got {n_grid}"));
    }
    if !(0.0..=interval.length()).contains(&s) {
        return param(format!("modulus argument {s} outside [0, {}]", interval.length()));
    }
    let values: Vec<f64> = interval.grid(n_grid).into_iter().map(|t| f.eval(t)).collect();
    let h = interval.length() / (n_grid - 1) as f64;
    // Tolerate s landing a rounding error short of a grid multiple.
    let lag = ((s / h) * (1.0 + 4.0 * f64::EPSILON)).floor() as usize;
    Ok(window_range(&values, lag.min(n_grid - 1)))
}

/// max over windows of `lag + 1` consecutive values of (max − min).
fn window_range(values: &[f64], lag: usize) -> f64 {
    if lag == 0 {
        return 0.0;
    }
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for (j, &v) in values.iter().enumerate() {
        while maxq.back().is_some_and(|&k| values[k] <= v) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&k| values[k] >= v) {
            minq.pop_back();
        }
        minq.push_back(j);
        let start = j.saturating_sub(lag);
        while maxq.front().is_some_and(|&k| k < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&k| k < start) {
            minq.pop_front();
        }
        if j >= lag.min(values.len() - 1) {
            best = best.max(values[maxq[0]] - values[minq[0]]);
        }
    }
    best
}

/// Grid modulus sampled at lag multiples of the grid spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledModulus {
    pub n_grid: usize,
    /// `(s, ω(s))`, starting at (0, 0), s strictly increasing.
    pub samples: Vec<(f64, f64)>,
}

/// ω on the grid at every lag (or at an even subset of lags for very large
/// grids).
pub fn sampled_modulus(f: &FunctionSpec, interval: Interval, n_grid: usize) -> Result<SampledModulus> {
    if n_grid < 2 {
        return param(format!("modulus grid needs at least 2 points, got {n_grid}"));
    }
    let values: Vec<f64> = interval.grid(n_grid).into_iter().map(|t| f.eval(t)).collect();
    let n = values.len();
    let h = interval.length() / (n - 1) as f64;
    let lag_to_s = |k: usize| if k == n - 1 { interval.length() } else { k as f64 * h };

    let samples = if n <= ALL_LAGS_LIMIT {
        let mut by_lag = vec![0.0f64; n];
        for i in 0..n {
            let (mut hi, mut lo) = (values[i], values[i]);
            for j in i + 1..n {
                let v = values[j];
                hi = hi.max(v);
                lo = lo.min(v);
                let slot = &mut by_lag[j - i];
                *slot = slot.max(hi - lo);
            }
        }
        // Window ranges are already monotone in the lag; keep the running max
        // anyway so rounding can never break monotonicity.
        let mut run = 0.0f64;
        by_lag
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                run = run.max(v);
                (lag_to_s(k), run)
            })
            .collect()
    } else {
        let stride = (n - 1).div_ceil(SAMPLED_LAGS);
        let mut lags: Vec<usize> = (0..n).step_by(stride).collect();
        if *lags.last().expect("non-empty") != n - 1 {
            lags.push(n - 1);
        }
        let mut run = 0.0f64;
        lags.into_iter()
            .map(|k| {
                run = run.max(window_range(&values, k));
                (lag_to_s(k), run)
            })
            .collect()
    };
    Ok(SampledModulus { n_grid: n, samples })
}

/// Upper concave hull of the samples (monotone chain).
pub fn least_concave_majorant(samples: &[(f64, f64)]) -> Result<MajorantCurve> {
    if samples.is_empty() {
        return Err(Error::Malformed("majorant needs at least one sample".into()));
    }
    if samples[0] != (0.0, 0.0) {
        return Err(Error::Malformed(format!("samples must start at (0, 0), got {:?}", samples[0])));
    }
    for w in samples.windows(2) {
        if !(w[0].0 < w[1].0) {
            return Err(Error::Malformed("sample abscissae must increase strictly".into()));
        }
        if !(w[0].1 <= w[1].1) {
            return Err(Error::Malformed("sample values must be nondecreasing".into()));
        }
    }
    if samples.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::Malformed("samples must be finite".into()));
    }

    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
    for &p in samples {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop `a` unless it lies strictly above the chord o → p.
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(MajorantCurve { knots: hull })
}

/// Linear interpolation between the bracketing knots.
pub fn eval_majorant(curve: &MajorantCurve, t: f64) -> Result<f64> {
    let knots = &curve.knots;
    if !(t >= 0.0 && t <= curve.span()) {
        return Err(Error::Domain {
            value: t,
            reason: format!("majorant is defined on [0, {}]", curve.span()),
        });
    }
    let i = knots.partition_point(|k| k.0 <= t);
    if i == knots.len() {
        return Ok(knots[i - 1].1);
    }
    let ((s0, v0), (s1, v1)) = (knots[i - 1], knots[i]);
    Ok(v0 + (v1 - v0) * (t - s0) / (s1 - s0))
}

/// A majorant built on a grid fine enough that one more doubling moves the
/// curve by less than [`REFINE_TOL`] at every sampled lag.
#[derive(Debug, Clone)]
pub struct RefinedMajorant {
    pub modulus: SampledModulus,
    pub curve: MajorantCurve,
    pub converged: bool,
}

pub fn refined_majorant(f: &FunctionSpec, interval: Interval, n_grid: usize) -> Result<RefinedMajorant> {
    if n_grid < 2 {
        return param(format!("modulus grid needs at least 2 points, got {n_grid}"));
    }
    let mut n = n_grid;
    let mut modulus = sampled_modulus(f, interval, n)?;
    let mut curve = least_concave_majorant(&modulus.samples)?;
    loop {
        let finer_n = 2 * n - 1;
        if finer_n > MAX_GRID {
            return Ok(RefinedMajorant {
                modulus,
                curve,
                converged: false,
            });
        }
        let finer_mod = sampled_modulus(f, interval, finer_n)?;
        let finer = least_concave_majorant(&finer_mod.samples)?;
        let shift = modulus
            .samples
            .iter()
            .map(|&(s, _)| (finer.eval_extended(s) - curve.eval_extended(s)).abs())
            .fold(0.0, f64::max);
        n = finer_n;
        modulus = finer_mod;
        curve = finer;
        if shift < REFINE_TOL {
            return Ok(RefinedMajorant {
                modulus,
                curve,
                converged: true,
            });
        }
    }
}

/// θ = ½ ‖P(x, ·)‖₁ = ½[(c − 1)|x − σ| + 2ν(x, t*)].
pub fn majorant_argument(kp: &KernelPoint) -> f64 {
    0.5 * kp.kernel_l1
}

/// 2 ω̃(f; θ) for a precomputed curve.
pub fn bound_with_curve(curve: &MajorantCurve, kp: &KernelPoint) -> f64 {
    2.0 * curve.eval_extended(majorant_argument(kp))
}

pub(crate) fn bound_from_point(f: &FunctionSpec, kp: &KernelPoint, w: &Weight, n_grid: usize) -> Result<f64> {
    let refined = refined_majorant(f, w.interval(), n_grid)?;
    Ok(bound_with_curve(&refined.curve, kp))
}

/// 2 ω̃(f; ½‖P‖₁), the modulus-based bound on |L_{w,c}(f)(x)|.
pub fn bound_majorant(f: &FunctionSpec, x: f64, c: f64, w: &Weight, n_grid: usize) -> Result<f64> {
    let kp = KernelPoint::new(x, c, w)?;
    bound_from_point(f, &kp, w, n_grid)
}

/// max |f| over the probe grid (plus any kinks).
pub fn sup_norm(f: &FunctionSpec, interval: Interval) -> f64 {
    interval
        .grid(PROBE_POINTS)
        .into_iter()
        .chain(f.kinks().iter().copied())
        .map(|t| f.eval(t).abs())
        .fold(0.0, f64::max)
}

/// 4 ‖f‖∞.
pub fn bound_sup_norm(f: &FunctionSpec, x: f64, c: f64, w: &Weight) -> Result<f64> {
    crate::weighted::u_wc(x, c, w)?;
    Ok(4.0 * sup_norm(f, w.interval()))
}
