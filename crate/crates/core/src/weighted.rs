//! The weighted one-point functional
//!
//! ```text
//! L_{w,c}(f)(x) = f(x) − (1/m(a,b)) ∫ f w − c·(f(b) − f(a))/(b − a)·(x − σ(a,b))
//! ```
//!
//! together with its Peano kernel P(x, t), the sign-change point t* of the
//! kernel, the coefficient ν(x, t*) and the derivative-based two-sided
//! bounds built from them.

use crate::error::{param, Error, Result};
use crate::function::FunctionSpec;
use crate::majorant;
use crate::numerics::root::{find_root, RootConfig};
use crate::weights::Weight;

/// Which side of σ(a, b) the evaluation point lies on. Determines where the
/// kernel changes sign: `Left` (x ≤ σ) puts t* in [x, b], `Right` (x > σ)
/// puts t* in [a, x].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn of(x: f64, w: &Weight) -> Self {
        if x <= w.sigma() {
            Branch::Left
        } else {
            Branch::Right
        }
    }
}

fn check_weighted_c(c: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&c) {
        return param(format!(
            "c = {c} is outside [0, 1]; weighted bounds are only available there (use the classical path for c up to 2)"
        ));
    }
    Ok(())
}

fn check_range(range: (f64, f64)) -> Result<()> {
    let (g, big_g) = range;
    if !(g.is_finite() && big_g.is_finite() && g <= big_g) {
        return param(format!("derivative range needs finite gamma <= Gamma, got ({g}, {big_g})"));
    }
    Ok(())
}

/// u_{w,c}(x) = c (x − σ(a,b)) / (b − a).
pub fn u_wc(x: f64, c: f64, w: &Weight) -> Result<f64> {
    check_weighted_c(c)?;
    w.interval().check_contains(x, "x")?;
    Ok(c * (x - w.sigma()) / w.interval().length())
}

/// Kernel geometry at one evaluation point: u, t*, ν and ‖P(x, ·)‖₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: f64,
    pub c: f64,
    pub u: f64,
    pub branch: Branch,
    pub t_star: f64,
    pub nu: f64,
    pub kernel_l1: f64,
}

impl KernelPoint {
    pub fn new(x: f64, c: f64, w: &Weight) -> Result<Self> {
        Self::on_branch(x, c, w, Branch::of(x, w))
    }

    /// Forces the branch. Both branches are well defined at x = σ(a, b),
    /// which is the only place the choice is free.
    pub fn on_branch(x: f64, c: f64, w: &Weight, branch: Branch) -> Result<Self> {
        let u = u_wc(x, c, w)?;
        let t_star = solve_t_star(x, u, w, branch)?;
        let nu = nu_between(x, t_star, w)?;
        let kernel_l1 = ((c - 1.0) * (x - w.sigma()).abs() + 2.0 * nu).max(0.0);
        Ok(Self {
            x,
            c,
            u,
            branch,
            t_star,
            nu,
            kernel_l1,
        })
    }

    /// P(x, t).
    pub fn kernel(&self, t: f64, w: &Weight) -> Result<f64> {
        let g = w.cdf_normalized(t)?;
        Ok(if t < self.x { g - self.u } else { g - 1.0 - self.u })
    }

    /// Interior breakpoints of P(x, ·): the jump at x and the sign change at t*.
    pub fn breaks(&self) -> [f64; 2] {
        [self.x, self.t_star]
    }
}

fn solve_t_star(x: f64, u: f64, w: &Weight, branch: Branch) -> Result<f64> {
    let (a, b) = (w.interval().a(), w.interval().b());
    let cfg = RootConfig::default();
    let (lo, hi, level) = match branch {
        Branch::Left => (x, b, 1.0 + u),
        Branch::Right => (a, x, u),
    };
    if level <= 0.0 {
        return Ok(a.max(lo));
    }
    if level >= 1.0 {
        return Ok(b.min(hi));
    }
    let g = |t: f64| w.cdf_normalized(t).map(|v| v - level).unwrap_or(f64::NAN);
    let (g_lo, g_hi) = (g(lo), g(hi));
    // Lemma-guaranteed bracket; rounding can only push the level onto an end.
    if g_lo >= 0.0 {
        return Ok(lo);
    }
    if g_hi <= 0.0 {
        return Ok(hi);
    }
    find_root(g, lo, hi, &cfg).map_err(|e| match e {
        Error::NoBracket { .. } => Error::Parameter(format!("no crossing point found for x = {x}")),
        other => other,
    })
}

/// (1/m(a,b)) ∫_x^{t*} (t − x) w(t) dt, always ≥ 0.
fn nu_between(x: f64, t_star: f64, w: &Weight) -> Result<f64> {
    let (lo, hi) = if t_star >= x { (x, t_star) } else { (t_star, x) };
    let m = w.mass(lo, hi)?;
    let big_m = w.first_moment(lo, hi)?;
    let signed = if t_star >= x { big_m - x * m } else { x * m - big_m };
    Ok((signed / w.total_mass()).max(0.0))
}

/// The crossing point t* of the kernel.
pub fn t_star(x: f64, c: f64, w: &Weight) -> Result<f64> {
    KernelPoint::new(x, c, w).map(|k| k.t_star)
}

/// ν(x, t*).
pub fn nu(x: f64, c: f64, w: &Weight) -> Result<f64> {
    KernelPoint::new(x, c, w).map(|k| k.nu)
}

/// P(x, t) for one-off evaluations.
pub fn kernel_p(x: f64, t: f64, c: f64, w: &Weight) -> Result<f64> {
    let u = u_wc(x, c, w)?;
    w.interval().check_contains(t, "t")?;
    let g = w.cdf_normalized(t)?;
    Ok(if t < x { g - u } else { g - 1.0 - u })
}

/// ∫_a^b |P(x, t)| dt in closed form, (c − 1)|x − σ| + 2ν(x, t*).
pub fn kernel_l1(x: f64, c: f64, w: &Weight) -> Result<f64> {
    KernelPoint::new(x, c, w).map(|k| k.kernel_l1)
}

/// ∫_a^b |P(x, t)| dt by direct piecewise quadrature.
pub fn kernel_l1_by_quadrature(kp: &KernelPoint, w: &Weight) -> Result<f64> {
    let (a, b) = (w.interval().a(), w.interval().b());
    w.integrate_plain(
        |t| kp.kernel(t, w).map(f64::abs).unwrap_or(f64::NAN),
        a,
        b,
        &kp.breaks(),
    )
}

/// ∫_a^b P(x, t) t^k dt for k = 0..=degree.
pub fn kernel_moments(kp: &KernelPoint, w: &Weight, degree: usize) -> Result<Vec<f64>> {
    let (a, b) = (w.interval().a(), w.interval().b());
    (0..=degree)
        .map(|k| {
            w.integrate_plain(
                |t| kp.kernel(t, w).unwrap_or(f64::NAN) * t.powi(k as i32),
                a,
                b,
                &kp.breaks(),
            )
        })
        .collect()
}

/// ∫_a^b P(x, t) f′(t) dt; equals the functional for C¹ (and piecewise C¹) f.
pub fn kernel_integral(f: &FunctionSpec, kp: &KernelPoint, w: &Weight) -> Result<f64> {
    if !f.has_derivative() {
        return param(format!("function {} has no derivative", f.descriptor()));
    }
    let (a, b) = (w.interval().a(), w.interval().b());
    let mut breaks = kp.breaks().to_vec();
    breaks.extend_from_slice(f.kinks());
    w.integrate_plain(
        |t| kp.kernel(t, w).unwrap_or(f64::NAN) * f.derivative(t).unwrap_or(f64::NAN),
        a,
        b,
        &breaks,
    )
}

/// (1/m(a,b)) ∫_a^b f(t) w(t) dt.
pub fn weighted_average(f: &FunctionSpec, w: &Weight) -> Result<f64> {
    let (a, b) = (w.interval().a(), w.interval().b());
    Ok(w.integrate_weighted(|t| f.eval(t), a, b, f.kinks())? / w.total_mass())
}

/// L_{w,c}(f)(x) given a precomputed weighted average of f.
pub fn functional_with_average(f: &FunctionSpec, average: f64, x: f64, c: f64, w: &Weight) -> f64 {
    let iv = w.interval();
    let slope = (f.eval(iv.b()) - f.eval(iv.a())) / iv.length();
    f.eval(x) - average - c * slope * (x - w.sigma())
}

/// L_{w,c}(f)(x). Any c ≥ 0 is accepted.
pub fn functional_l(f: &FunctionSpec, x: f64, c: f64, w: &Weight) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return param(format!("c must be finite and non-negative, got {c}"));
    }
    w.interval().check_contains(x, "x")?;
    let avg = weighted_average(f, w)?;
    Ok(functional_with_average(f, avg, x, c, w))
}

/// Lower and upper bounds on L_{w,c}(f)(x) from γ ≤ f′ ≤ Γ.
pub fn bounds_from_point(range: (f64, f64), kp: &KernelPoint, w: &Weight) -> (f64, f64) {
    let (g, big_g) = range;
    let drift = (1.0 - kp.c) * (kp.x - w.sigma());
    (drift * g + (g - big_g) * kp.nu, drift * big_g + (big_g - g) * kp.nu)
}

pub fn bounds_derivative(range: (f64, f64), x: f64, c: f64, w: &Weight) -> Result<(f64, f64)> {
    check_range(range)?;
    let kp = KernelPoint::new(x, c, w)?;
    Ok(bounds_from_point(range, &kp, w))
}

/// The L²-type bound for c = 1 divided by (Γ − γ):
/// ½ √(b−a)/m · {∫ K² − m²(x − σ)²/(b − a)}^{1/2}.
pub fn l2_factor(x: f64, w: &Weight) -> Result<f64> {
    let iv = w.interval();
    iv.check_contains(x, "x")?;
    let (a, b) = (iv.a(), iv.b());
    let m = w.total_mass();
    let k = |t: f64| -> f64 {
        let v = if t <= x { w.mass(a, t) } else { w.mass(t, b).map(|v| -v) };
        v.unwrap_or(f64::NAN)
    };
    let k2 = w.integrate_plain(|t| k(t).powi(2), a, b, &[x])?;
    let inner = (k2 - m * m * (x - w.sigma()).powi(2) / iv.length()).max(0.0);
    Ok(0.5 * iv.length().sqrt() / m * inner.sqrt())
}

pub fn bound_l2(range: (f64, f64), x: f64, w: &Weight) -> Result<f64> {
    check_range(range)?;
    Ok((range.1 - range.0) * l2_factor(x, w)?)
}

/// Piecewise-affine function with slope Γ on [a, σ] and γ on [σ, b]; it
/// attains |L_w(f)(σ)| = (Γ − γ) ν(σ, b).
pub fn sharpness_witness(w: &Weight, gamma: f64, big_gamma: f64) -> Result<FunctionSpec> {
    if !(gamma < big_gamma) {
        return param(format!("witness needs gamma < Gamma, got ({gamma}, {big_gamma})"));
    }
    let iv = w.interval();
    let (a, b, s) = (iv.a(), iv.b(), w.sigma());
    let peak = big_gamma * (s - a);
    FunctionSpec::piecewise_linear(
        vec![(a, 0.0), (s, peak), (b, peak + gamma * (b - s))],
        iv,
        &format!("witness:{gamma},{big_gamma}"),
    )
}

/// One evaluation record for a function, evaluation point and c.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub x: f64,
    pub c: f64,
    pub l_value: f64,
    pub lower: f64,
    pub upper: f64,
    pub t_star: f64,
    pub nu: f64,
    pub kernel_l1: f64,
    pub majorant_bound: Option<f64>,
    pub l2_bound: Option<f64>,
}

impl BoundReport {
    pub fn sandwich_slack(&self) -> f64 {
        (self.l_value - self.lower).min(self.upper - self.l_value)
    }
}

/// Optional pieces of a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Grid size for the modulus of continuity; `None` skips the majorant bound.
    pub majorant_grid: Option<usize>,
    /// Include the L²-type bound (only meaningful for c = 1).
    pub l2: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            majorant_grid: Some(majorant::DEFAULT_GRID),
            l2: true,
        }
    }
}

pub fn bound_report(f: &FunctionSpec, x: f64, c: f64, w: &Weight, opts: ReportOptions) -> Result<BoundReport> {
    let range = f
        .derivative_range()
        .ok_or_else(|| Error::Parameter(format!("function {} has no derivative range", f.descriptor())))?;
    check_range(range)?;
    let kp = KernelPoint::new(x, c, w)?;
    let l_value = functional_l(f, x, c, w)?;
    let (lower, upper) = bounds_from_point(range, &kp, w);
    let majorant_bound = match opts.majorant_grid {
        Some(n) => Some(majorant::bound_from_point(f, &kp, w, n)?),
        None => None,
    };
    let l2_bound = if opts.l2 && c == 1.0 {
        Some(bound_l2(range, x, w)?)
    } else {
        None
    };
    Ok(BoundReport {
        x,
        c,
        l_value,
        lower,
        upper,
        t_star: kp.t_star,
        nu: kp.nu,
        kernel_l1: kp.kernel_l1,
        majorant_bound,
        l2_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn uniform() -> Weight {
        Weight::uniform(Interval::unit())
    }
    fn arcsine() -> Weight {
        Weight::beta(0.5, 0.5).unwrap()
    }
    fn half_square() -> FunctionSpec {
        FunctionSpec::polynomial(vec![0.0, 0.0, 0.5], Interval::unit()).unwrap()
    }
    fn builtins() -> Vec<Weight> {
        vec![
            uniform(),
            Weight::beta(2.0, 3.0).unwrap(),
            arcsine(),
            Weight::truncated_normal(0.0, 1.0, Interval::unit()).unwrap(),
        ]
    }

    #[test]
    fn u_examples() {
        assert_abs_diff_eq!(u_wc(0.25, 1.0, &uniform()).unwrap(), -0.25, epsilon = 1e-16);
        assert_eq!(u_wc(0.8, 0.0, &arcsine()).unwrap(), 0.0);
        assert_abs_diff_eq!(u_wc(0.4, 1.0, &arcsine()).unwrap(), -0.1, epsilon = 1e-16);
        assert!(u_wc(0.4, 1.5, &arcsine()).is_err());
        assert!(u_wc(0.4, -0.1, &arcsine()).is_err());
        assert!(u_wc(1.4, 0.5, &arcsine()).is_err());
    }

    #[test]
    fn t_star_examples() {
        assert_abs_diff_eq!(t_star(0.25, 1.0, &uniform()).unwrap(), 0.75, epsilon = 1e-12);
        for w in builtins() {
            assert_eq!(t_star(0.1, 0.0, &w).unwrap(), 1.0);
            assert_eq!(t_star(0.95, 0.0, &w).unwrap(), 0.0);
        }
        let expected = (0.45 * PI).sin().powi(2);
        assert_abs_diff_eq!(t_star(0.4, 1.0, &arcsine()).unwrap(), expected, epsilon = 1e-11);
    }

    #[test]
    fn uniform_t_star_closed_form() {
        let iv = Interval::new(-1.0, 3.0).unwrap();
        let w = Weight::uniform(iv);
        for x in iv.grid(21) {
            let ts = t_star(x, 1.0, &w).unwrap();
            let expected = if x <= 1.0 { x + 2.0 } else { x - 2.0 };
            assert_abs_diff_eq!(ts, expected, epsilon = 1e-11);
        }
    }

    #[test]
    fn nu_examples() {
        for x in Interval::unit().grid(101) {
            assert_abs_diff_eq!(nu(x, 1.0, &uniform()).unwrap(), 0.125, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(nu(0.5, 0.0, &arcsine()).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(nu(0.0, 0.0, &arcsine()).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(nu(1.0, 0.0, &arcsine()).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn nu_branches_agree_at_sigma() {
        for w in builtins() {
            for c in [0.0, 0.3, 1.0] {
                let s = w.sigma();
                let l = KernelPoint::on_branch(s, c, &w, Branch::Left).unwrap();
                let r = KernelPoint::on_branch(s, c, &w, Branch::Right).unwrap();
                assert_eq!(l.t_star, 1.0);
                assert_eq!(r.t_star, 0.0);
                assert!((l.nu - r.nu).abs() <= 1e-10, "{:?}: {} vs {}", w.kind(), l.nu, r.nu);
            }
        }
    }

    #[test]
    fn kernel_examples() {
        assert_abs_diff_eq!(kernel_p(0.5, 0.25, 1.0, &uniform()).unwrap(), 0.25, epsilon = 1e-16);
        assert_abs_diff_eq!(kernel_p(0.5, 0.75, 1.0, &uniform()).unwrap(), -0.25, epsilon = 1e-16);
        for w in builtins() {
            assert_eq!(kernel_p(0.5, 0.0, 0.0, &w).unwrap(), 0.0);
        }
    }

    #[test]
    fn kernel_l1_examples() {
        assert_abs_diff_eq!(kernel_l1(0.5, 1.0, &uniform()).unwrap(), 0.25, epsilon = 1e-12);
        for w in builtins() {
            let kp = KernelPoint::new(w.sigma(), 1.0, &w).unwrap();
            assert_abs_diff_eq!(kp.kernel_l1, 2.0 * kp.nu, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(kernel_l1(0.0, 0.0, &arcsine()).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn kernel_l1_matches_quadrature() {
        for w in builtins() {
            for c in [0.0, 0.25, 0.5, 0.75, 1.0] {
                for x in Interval::unit().grid(11) {
                    let kp = KernelPoint::new(x, c, &w).unwrap();
                    let q = kernel_l1_by_quadrature(&kp, &w).unwrap();
                    assert!((q - kp.kernel_l1).abs() <= 1e-9, "{:?} x={x} c={c}: {q} vs {}", w.kind(), kp.kernel_l1);
                }
            }
        }
    }

    #[test]
    fn functional_examples() {
        let constant = FunctionSpec::polynomial(vec![3.0], Interval::unit()).unwrap();
        for w in builtins() {
            assert_abs_diff_eq!(functional_l(&constant, 0.3, 0.7, &w).unwrap(), 0.0, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(functional_l(&half_square(), 0.5, 0.0, &arcsine()).unwrap(), -0.0625, epsilon = 1e-13);
        assert_abs_diff_eq!(
            functional_l(&half_square(), 0.5, 1.0, &uniform()).unwrap(),
            -1.0 / 24.0,
            epsilon = 1e-13
        );
        assert!(functional_l(&half_square(), 0.5, -1.0, &uniform()).is_err());
        // c > 1 is fine for the functional itself.
        assert!(functional_l(&half_square(), 0.5, 1.7, &uniform()).is_ok());
    }

    #[test]
    fn affine_is_annihilated_at_c_one() {
        let f = FunctionSpec::polynomial(vec![0.3, -1.7], Interval::unit()).unwrap();
        for w in builtins() {
            for x in Interval::unit().grid(11) {
                assert!(functional_l(&f, x, 1.0, &w).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_identity_on_cubic() {
        let f = FunctionSpec::polynomial(vec![0.2, -1.0, 1.5, 0.7], Interval::unit()).unwrap();
        for w in builtins() {
            for c in [0.0, 0.5, 1.0] {
                for x in [0.0, 0.33, 0.5, 0.9, 1.0] {
                    let kp = KernelPoint::new(x, c, &w).unwrap();
                    let direct = kernel_integral(&f, &kp, &w).unwrap();
                    let l = functional_l(&f, x, c, &w).unwrap();
                    assert!((direct - l).abs() < 1e-9, "{:?} x={x} c={c}: {direct} vs {l}", w.kind());
                    let mom = kernel_moments(&kp, &w, 2).unwrap();
                    let via_moments = -mom[0] + 3.0 * mom[1] + 2.1 * mom[2];
                    assert!((via_moments - direct).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = bounds_derivative((0.0, 1.0), 0.0, 0.0, &arcsine()).unwrap();
        assert_abs_diff_eq!(lo, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 0.0, epsilon = 1e-14);
        for w in builtins() {
            let (lo, hi) = bounds_derivative((2.5, 2.5), 0.37, 1.0, &w).unwrap();
            assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(hi, 0.0, epsilon = 1e-15);
        }
        let (lo, hi) = bounds_derivative((0.0, 1.0), 0.5, 0.0, &arcsine()).unwrap();
        assert_abs_diff_eq!(lo, -1.0 / (2.0 * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 1.0 / (2.0 * PI), epsilon = 1e-14);
        assert!(bounds_derivative((1.0, 0.0), 0.5, 0.0, &arcsine()).is_err());
        assert!(bounds_derivative((0.0, 1.0), 0.5, 1.5, &arcsine()).is_err());
    }

    #[test]
    fn l2_examples() {
        let v = bound_l2((0.0, 1.0), 0.5, &uniform()).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (4.0 * 3f64.sqrt()), epsilon = 1e-12);
        assert_eq!(bound_l2((0.7, 0.7), 0.5, &arcsine()).unwrap(), 0.0);
        let b = bound_l2((0.0, 1.0), 0.5, &arcsine()).unwrap();
        assert!(b > 0.0 && b <= 0.25, "{b}");
        let iv = Interval::new(2.0, 5.0).unwrap();
        let v = bound_l2((-1.0, 1.0), 3.5, &Weight::uniform(iv)).unwrap();
        assert_abs_diff_eq!(v, 3.0 * 2.0 / (4.0 * 3f64.sqrt()), epsilon = 1e-11);
    }

    #[test]
    fn witness_attains_bound() {
        let f = sharpness_witness(&uniform(), 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(functional_l(&f, 0.5, 1.0, &uniform()).unwrap(), 0.125, epsilon = 1e-12);
        let f = sharpness_witness(&arcsine(), -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(functional_l(&f, 0.5, 1.0, &arcsine()).unwrap(), 1.0 / PI, epsilon = 1e-12);
        assert!(sharpness_witness(&arcsine(), 0.0, 0.0).is_err());
    }

    #[test]
    fn report_collects_fields() {
        let r = bound_report(&half_square(), 0.4, 0.0, &arcsine(), ReportOptions::default()).unwrap();
        assert!(r.lower <= r.l_value && r.l_value <= r.upper);
        assert!(r.majorant_bound.unwrap() >= r.l_value.abs());
        assert!(r.l2_bound.is_none());
        let r = bound_report(&half_square(), 0.4, 1.0, &arcsine(), ReportOptions::default()).unwrap();
        assert!(r.l2_bound.unwrap() >= r.l_value.abs());
    }
}
