//! Unweighted one-point functional L_c and its closed-form bounds.

use crate::error::{param, Result};
use crate::function::FunctionSpec;
use crate::interval::Interval;
use crate::numerics::quad::{integrate_pieces, QuadConfig};

fn check_c(c: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&c) {
        return param(format!("c = {c} is outside [0, 2]"));
    }
    Ok(())
}

/// (1/(b − a)) ∫_a^b f.
pub fn average(f: &FunctionSpec, interval: Interval) -> Result<f64> {
    let v = integrate_pieces(
        |t| f.eval(t),
        interval.a(),
        interval.b(),
        f.kinks(),
        &QuadConfig::default(),
    )?;
    Ok(v / interval.length())
}

/// u_c(x) = c (x − (a + b)/2).
pub fn u_c(x: f64, c: f64, interval: Interval) -> f64 {
    c * (x - interval.midpoint())
}

pub fn functional_lc_with_average(f: &FunctionSpec, average: f64, x: f64, c: f64, interval: Interval) -> f64 {
    let slope = (f.eval(interval.b()) - f.eval(interval.a())) / interval.length();
    f.eval(x) - average - slope * u_c(x, c, interval)
}

/// L_c(f)(x) = f(x) − mean(f) − c (f(b) − f(a))/(b − a) · (x − (a + b)/2).
pub fn functional_lc(f: &FunctionSpec, x: f64, c: f64, interval: Interval) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return param(format!("c must be finite and non-negative, got {c}"));
    }
    interval.check_contains(x, "x")?;
    Ok(functional_lc_with_average(f, average(f, interval)?, x, c, interval))
}

/// Two-sided bounds on L_c(f)(x) for c ∈ [0, 2] and γ ≤ f′ ≤ Γ.
pub fn bounds_e33(range: (f64, f64), x: f64, c: f64, interval: Interval) -> Result<(f64, f64)> {
    check_c(c)?;
    interval.check_contains(x, "x")?;
    let (g, big_g) = range;
    if !(g <= big_g) {
        return param(format!("derivative range needs gamma <= Gamma, got ({g}, {big_g})"));
    }
    let (a, b) = (interval.a(), interval.b());
    let u = u_c(x, c, interval);
    let left = (x - a - u).powi(2);
    let right = (x - b - u).powi(2);
    let scale = 2.0 * (b - a);
    Ok(((left * g - right * big_g) / scale, (left * big_g - right * g) / scale))
}

/// ((x − a)² + (b − x)²) / (2(b − a)); multiply by ‖f′‖∞.
pub fn anastassiou_bound(x: f64, interval: Interval) -> Result<f64> {
    interval.check_contains(x, "x")?;
    let (a, b) = (interval.a(), interval.b());
    Ok(((x - a).powi(2) + (b - x).powi(2)) / (2.0 * (b - a)))
}

/// The three constant-width bounds for c = 1: (b−a)(Γ−γ)/8,
/// (b−a)(Γ−γ)/(4√3) and (b−a)(Γ−γ)/4.
pub fn constant_chain(range: (f64, f64), interval: Interval) -> (f64, f64, f64) {
    let width = interval.length() * (range.1 - range.0);
    (width / 8.0, width / (4.0 * 3f64.sqrt()), width / 4.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    pub x: f64,
    pub c: f64,
    pub l_value: f64,
    pub e33_lower: f64,
    pub e33_upper: f64,
    pub cheng: f64,
    pub matic: f64,
    pub dragomir_wang: f64,
    pub anastassiou: f64,
}

pub fn classical_report(f: &FunctionSpec, x: f64, c: f64, interval: Interval) -> Result<ClassicalReport> {
    let range = f
        .derivative_range()
        .ok_or_else(|| crate::Error::Parameter(format!("function {} has no derivative range", f.descriptor())))?;
    let (e33_lower, e33_upper) = bounds_e33(range, x, c, interval)?;
    let (cheng, matic, dragomir_wang) = constant_chain(range, interval);
    Ok(ClassicalReport {
        x,
        c,
        l_value: functional_lc(f, x, c, interval)?,
        e33_lower,
        e33_upper,
        cheng,
        matic,
        dragomir_wang,
        anastassiou: anastassiou_bound(x, interval)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighted::functional_l;
    use crate::weights::Weight;
    use approx::assert_abs_diff_eq;

    fn half_square() -> FunctionSpec {
        FunctionSpec::polynomial(vec![0.0, 0.0, 0.5], Interval::unit()).unwrap()
    }

    #[test]
    fn functional_examples() {
        let iv = Interval::unit();
        assert_abs_diff_eq!(functional_lc(&half_square(), 0.5, 1.0, iv).unwrap(), -1.0 / 24.0, epsilon = 1e-14);
        assert_abs_diff_eq!(functional_lc(&half_square(), 0.0, 0.0, iv).unwrap(), -1.0 / 6.0, epsilon = 1e-14);
        let affine = FunctionSpec::polynomial(vec![1.0, -2.0], iv).unwrap();
        for x in iv.grid(11) {
            assert!(functional_lc(&affine, x, 1.0, iv).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn e33_examples() {
        let iv = Interval::new(-1.0, 2.0).unwrap();
        let (lo, hi) = bounds_e33((-0.5, 2.0), -1.0, 0.0, iv).unwrap();
        assert_abs_diff_eq!(lo, -3.0 * 2.0 / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 3.0 * 0.5 / 2.0, epsilon = 1e-14);
        let (lo, hi) = bounds_e33((0.0, 1.0), 0.5, 1.0, Interval::unit()).unwrap();
        assert_abs_diff_eq!(lo, -0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.125, epsilon = 1e-15);
        assert!(bounds_e33((0.0, 1.0), 0.5, 2.5, Interval::unit()).is_err());
        assert!(bounds_e33((1.0, 0.0), 0.5, 1.0, Interval::unit()).is_err());
    }

    #[test]
    fn e33_collapses_for_affine() {
        let iv = Interval::unit();
        let f = FunctionSpec::polynomial(vec![0.4, 1.3], iv).unwrap();
        for c in [0.0, 0.5, 1.0, 1.5, 2.0] {
            for x in iv.grid(7) {
                let (lo, hi) = bounds_e33((1.3, 1.3), x, c, iv).unwrap();
                let l = functional_lc(&f, x, c, iv).unwrap();
                assert_abs_diff_eq!(lo, hi, epsilon = 1e-15);
                assert_abs_diff_eq!(lo, l, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn anastassiou_examples() {
        let iv = Interval::unit();
        assert_eq!(anastassiou_bound(0.5, iv).unwrap(), 0.25);
        assert_eq!(anastassiou_bound(0.0, iv).unwrap(), 0.5);
        assert_eq!(anastassiou_bound(1.0, iv).unwrap(), 0.5);
    }

    #[test]
    fn chain_is_ordered() {
        let (c, m, d) = constant_chain((-1.0, 2.0), Interval::new(0.0, 3.0).unwrap());
        assert!(c <= m && m <= d);
        assert_abs_diff_eq!(c, 9.0 / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_weighted_functional_at_uniform_weight() {
        let iv = Interval::new(-0.5, 1.5).unwrap();
        let w = Weight::uniform(iv);
        let f = FunctionSpec::polynomial(vec![0.3, -1.0, 0.8, 1.2], iv).unwrap();
        for c in [0.0, 0.4, 1.0, 1.6] {
            for x in iv.grid(9) {
                let a = functional_lc(&f, x, c, iv).unwrap();
                let b = functional_l(&f, x, c, &w).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn report_fields() {
        let r = classical_report(&half_square(), 0.3, 1.5, Interval::unit()).unwrap();
        assert!(r.e33_lower <= r.l_value && r.l_value <= r.e33_upper);
        assert!(r.cheng <= r.matic && r.matic <= r.dragomir_wang);
    }
}
