//! Randomized inequality battery over cubics, weights, c values and
//! evaluation points.
//!
//! Everything that depends only on (weight, x, c) is computed once: the
//! kernel point, the kernel moments ∫P t^k and the L² factor. A polynomial
//! f then only needs its coefficients, its weighted moments and one
//! majorant curve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classical;
use crate::error::{param, Error, Result};
use crate::function::{differentiate, FunctionSpec};
use crate::interval::Interval;
use crate::majorant::{least_concave_majorant, sampled_modulus, sup_norm, MajorantCurve, SampledModulus};
use crate::weighted::{bounds_from_point, functional_with_average, kernel_integral, kernel_moments, l2_factor, KernelPoint};
use crate::weights::Weight;

pub const C_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
pub const E33_C_GRID: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];
pub const X_POINTS: usize = 11;
const K_FUNCTIONAL_T: usize = 21;
/// Trials below this index also get the kernel identity by direct quadrature.
const DIRECT_IDENTITY_TRIALS: u64 = 2;

/// Cubic with coefficients uniform in [−2, 2] on [0, 1], drawn from stream
/// `index` of a ChaCha8 generator seeded with `seed`.
pub fn random_function(seed: u64, index: u64) -> FunctionSpec {
    random_function_on(seed, index, Interval::unit())
}

pub fn random_function_on(seed: u64, index: u64, domain: Interval) -> FunctionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    FunctionSpec::polynomial(coeffs, domain).expect("finite coefficients")
}

/// The four weights every battery run covers, all on [0, 1].
pub fn battery_weights() -> Vec<Weight> {
    vec![
        Weight::uniform(Interval::unit()),
        Weight::beta(2.0, 3.0).expect("valid"),
        Weight::beta(0.5, 0.5).expect("valid"),
        Weight::truncated_normal(0.0, 1.0, Interval::unit()).expect("valid"),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryConfig {
    pub seed: u64,
    pub trials: u64,
    /// A check passes when its margin is at least −slack_tol.
    pub slack_tol: f64,
    /// Modulus grid for the majorant checks.
    pub n_grid: usize,
    pub parallel: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 1000,
            slack_tol: 1e-8,
            n_grid: crate::majorant::DEFAULT_GRID,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    /// Smallest margin seen (bound minus value; negative means violated).
    pub worst_slack: f64,
    /// Where the smallest margin occurred.
    pub worst_case: String,
}

impl CheckSummary {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            worst_slack: f64::INFINITY,
            worst_case: String::new(),
        }
    }

    fn record(&mut self, margin: f64, tol: f64, at: impl FnOnce() -> String) {
        if margin >= -tol {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        // NaN margins count as failures and always become the worst case.
        if margin < self.worst_slack || margin.is_nan() && !self.worst_slack.is_nan() {
            self.worst_slack = margin;
            self.worst_case = at();
        }
    }

    fn merge(&mut self, other: &CheckSummary) {
        self.passed += other.passed;
        self.failed += other.failed;
        let replace = if other.worst_slack.is_nan() {
            !self.worst_slack.is_nan()
        } else {
            other.worst_slack < self.worst_slack
        };
        if replace {
            self.worst_slack = other.worst_slack;
            self.worst_case = other.worst_case.clone();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatterySummary {
    pub seed: u64,
    pub trials: u64,
    pub checks: Vec<CheckSummary>,
}

impl BatterySummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_NAMES: [&str; 13] = [
    "kernel_identity",
    "sandwich",
    "e33_sandwich",
    "cheng",
    "anastassiou",
    "sup_norm",
    "kernel_l1_derivative",
    "l2_bound",
    "l2_cap",
    "majorant_domination",
    "majorant_shape",
    "majorant_pinch",
    "k_functional",
];

fn fresh_checks() -> Vec<CheckSummary> {
    CHECK_NAMES.iter().map(|&n| CheckSummary::new(n)).collect()
}

struct Point {
    kp: KernelPoint,
    /// ∫ P(x, t) t^k dt.
    kernel_moments: Vec<f64>,
    l2_factor: Option<f64>,
}

struct WeightCase {
    weight: Weight,
    label: String,
    /// (1/m) ∫ t^k w.
    moments: Vec<f64>,
    points: Vec<Point>,
}

fn prepare(weight: Weight, degree: usize) -> Result<WeightCase> {
    let iv = weight.interval();
    let m = weight.total_mass();
    let moments = (0..=degree)
        .map(|k| Ok(weight.integrate_weighted(|t| t.powi(k as i32), iv.a(), iv.b(), &[])? / m))
        .collect::<Result<Vec<f64>>>()?;
    let mut points = Vec::new();
    for x in iv.grid(X_POINTS) {
        for c in C_GRID {
            let kp = KernelPoint::new(x, c, &weight)?;
            points.push(Point {
                kernel_moments: kernel_moments(&kp, &weight, degree.saturating_sub(1))?,
                l2_factor: if c == 1.0 { Some(l2_factor(x, &weight)?) } else { None },
                kp,
            });
        }
    }
    Ok(WeightCase {
        label: weight.label(),
        weight,
        moments,
        points,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Running battery against a fixed partner list for the K-functional.
struct Partners {
    others: Vec<(FunctionSpec, f64)>,
}

fn g_sup(g: &FunctionSpec) -> f64 {
    g.derivative_sup_norm().expect("partners carry a derivative range")
}

fn sup_diff(f: &FunctionSpec, g: &FunctionSpec, grid: &[f64]) -> f64 {
    let probe = f.domain().grid(crate::function::PROBE_POINTS);
    grid.iter()
        .chain(probe.iter())
        .map(|&t| (f.eval(t) - g.eval(t)).abs())
        .fold(0.0, f64::max)
}

struct Trial<'a> {
    tag: String,
    f: &'a FunctionSpec,
    coeffs: &'a [f64],
    partner: &'a FunctionSpec,
    direct_identity: bool,
}

fn run_trial(t: &Trial, cases: &[WeightCase], fixed: &Partners, cfg: &BatteryConfig) -> Result<Vec<CheckSummary>> {
    let mut checks = fresh_checks();
    let tol = cfg.slack_tol;
    let f = t.f;
    let iv = Interval::unit();
    let range = f
        .derivative_range()
        .ok_or_else(|| Error::Parameter(format!("{} has no derivative range", f.descriptor())))?;
    let (g_lo, g_hi) = range;
    let d_sup = g_lo.abs().max(g_hi.abs());
    let f_sup = sup_norm(f, iv);
    let dcoeffs = differentiate(t.coeffs);

    let modulus: SampledModulus = sampled_modulus(f, iv, cfg.n_grid)?;
    let curve: MajorantCurve = least_concave_majorant(&modulus.samples)?;
    let grid = iv.grid(cfg.n_grid);

    macro_rules! rec {
        ($i:expr, $margin:expr, $($fmt:tt)*) => {
            checks[$i].record($margin, tol, || format!("{} {}", t.tag, format!($($fmt)*)))
        };
    }

    for case in cases {
        let w = &case.weight;
        let avg = dot(t.coeffs, &case.moments);
        for p in &case.points {
            let (x, c) = (p.kp.x, p.kp.c);
            let l = functional_with_average(f, avg, x, c, w);
            let at = format!("{} x={x} c={c}", case.label);

            let via_kernel = dot(&dcoeffs, &p.kernel_moments);
            rec!(0, -(l - via_kernel).abs(), "{at} (moments)");
            if t.direct_identity {
                let direct = kernel_integral(f, &p.kp, w)?;
                rec!(0, -(l - direct).abs(), "{at} (direct)");
            }

            let (lower, upper) = bounds_from_point(range, &p.kp, w);
            rec!(1, (l - lower).min(upper - l), "{at}");
            rec!(5, 4.0 * f_sup - l.abs(), "{at}");
            rec!(6, d_sup * p.kp.kernel_l1 - l.abs(), "{at}");
            if let Some(factor) = p.l2_factor {
                let l2 = (g_hi - g_lo) * factor;
                rec!(7, l2 - l.abs(), "{at}");
                rec!(8, 0.25 * iv.length() * (g_hi - g_lo) - l2, "{at}");
            }
            let theta = crate::majorant::majorant_argument(&p.kp);
            rec!(9, 2.0 * curve.eval_extended(theta) - l.abs(), "{at}");
        }
    }

    // Unweighted closed forms at the uniform weight.
    let uniform_avg = dot(t.coeffs, &(0..t.coeffs.len()).map(|k| 1.0 / (k + 1) as f64).collect::<Vec<_>>());
    let (cheng, _, _) = classical::constant_chain(range, iv);
    for x in iv.grid(X_POINTS) {
        for c in E33_C_GRID {
            let l = classical::functional_lc_with_average(f, uniform_avg, x, c, iv);
            let (lower, upper) = classical::bounds_e33(range, x, c, iv)?;
            rec!(2, (l - lower).min(upper - l), "uniform x={x} c={c}");
            if c == 1.0 {
                rec!(3, cheng - l.abs(), "uniform x={x}");
            }
            if c == 0.0 {
                rec!(4, classical::anastassiou_bound(x, iv)? * d_sup - l.abs(), "uniform x={x}");
            }
        }
    }

    rec!(10, if curve.is_valid(1e-12) { 0.0 } else { -1.0 }, "curve");
    for &(s, omega) in &modulus.samples {
        let tilde = curve.eval_extended(s);
        rec!(11, (tilde - omega).min(2.0 * omega - tilde), "s={s}");
    }

    let mut partners: Vec<(&FunctionSpec, f64)> = vec![(f, d_sup), (t.partner, g_sup(t.partner))];
    partners.extend(fixed.others.iter().map(|(g, s)| (g, *s)));
    for (g, g_norm) in partners {
        let dist = sup_diff(f, g, &grid);
        for s in iv.grid(K_FUNCTIONAL_T) {
            let margin = dist + 0.5 * s * g_norm - 0.5 * curve.eval_extended(s);
            rec!(12, margin, "g={} t={s}", g.descriptor());
        }
    }
    Ok(checks)
}

fn merge_all(seed: u64, trials: u64, parts: Vec<Vec<CheckSummary>>) -> BatterySummary {
    let mut checks = fresh_checks();
    for part in &parts {
        for (acc, c) in checks.iter_mut().zip(part) {
            acc.merge(c);
        }
    }
    BatterySummary { seed, trials, checks }
}

/// All checks on `cfg.trials` random cubics. Deterministic for a fixed
/// seed whether or not it runs in parallel.
pub fn run_battery(cfg: &BatteryConfig) -> Result<BatterySummary> {
    if cfg.trials == 0 {
        return param("battery needs at least one trial");
    }
    let functions: Vec<FunctionSpec> = (0..cfg.trials).map(|i| random_function(cfg.seed, i)).collect();
    run_battery_on(&functions, cfg)
}

/// All checks on a caller-supplied list of polynomials on [0, 1].
pub fn run_battery_on(functions: &[FunctionSpec], cfg: &BatteryConfig) -> Result<BatterySummary> {
    if functions.is_empty() {
        return param("battery needs at least one function");
    }
    // A negative tolerance demands a positive margin; useful to exercise
    // the failure path.
    if !cfg.slack_tol.is_finite() {
        return param(format!("slack tolerance must be finite, got {}", cfg.slack_tol));
    }
    if cfg.n_grid < 2 {
        return param(format!("modulus grid needs at least 2 points, got {}", cfg.n_grid));
    }
    let mut degree = 1;
    for f in functions {
        let coeffs = f
            .coefficients()
            .ok_or_else(|| Error::Parameter(format!("battery needs polynomials, got {}", f.descriptor())))?;
        if f.domain() != Interval::unit() {
            return param("battery functions must live on [0, 1]");
        }
        degree = degree.max(coeffs.len() - 1);
    }
    let cases = battery_weights()
        .into_iter()
        .map(|w| prepare(w, degree))
        .collect::<Result<Vec<_>>>()?;
    let zero = FunctionSpec::polynomial(vec![0.0], Interval::unit())?;
    let sine = FunctionSpec::sine(3.0, Interval::unit());
    let fixed = Partners {
        others: vec![(zero.clone(), 0.0), (sine.clone(), g_sup(&sine))],
    };

    let n = functions.len();
    let trial = |i: usize| -> Result<Vec<CheckSummary>> {
        let f = &functions[i];
        run_trial(
            &Trial {
                tag: format!("seed={} trial={i}", cfg.seed),
                f,
                coeffs: f.coefficients().expect("checked above"),
                partner: &functions[(i + 1) % n],
                direct_identity: (i as u64) < DIRECT_IDENTITY_TRIALS,
            },
            &cases,
            &fixed,
            cfg,
        )
    };
    let parts: Vec<Vec<CheckSummary>> = if cfg.parallel {
        (0..n).into_par_iter().map(trial).collect::<Result<_>>()?
    } else {
        (0..n).map(trial).collect::<Result<_>>()?
    };
    Ok(merge_all(cfg.seed, n as u64, parts))
}
