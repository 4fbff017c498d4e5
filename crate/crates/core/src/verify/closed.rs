//! Closed-form ν for the Beta and normal weights at c = 0, written
//! independently of the generic t*/partial-moment machinery.

use std::f64::consts::PI;

use crate::error::{param, Result};
use crate::interval::Interval;
use crate::numerics::special::{inc_beta_reg, laplace, normal_cdf};

fn check_beta(x: f64, p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && q > 0.0) {
        return param(format!("Beta parameters must be positive, got ({p}, {q})"));
    }
    if !(0.0..=1.0).contains(&x) {
        return param(format!("x = {x} outside [0, 1]"));
    }
    Ok(())
}

fn beta_nu_with(x: f64, p: f64, q: f64, shifted: f64) -> Result<f64> {
    let sigma = p / (p + q);
    let i = inc_beta_reg(x, p, q)?;
    Ok(if x <= sigma {
        sigma - x - shifted + x * i
    } else {
        x * i - shifted
    })
}

/// ν̃(x) for Beta(p, q) with B(x; p+1, q) normalized by B(p, q), i.e.
/// σ·I(x; p+1, q).
pub fn beta_nu_closed(x: f64, p: f64, q: f64) -> Result<f64> {
    check_beta(x, p, q)?;
    let shifted = p / (p + q) * inc_beta_reg(x, p + 1.0, q)?;
    beta_nu_with(x, p, q, shifted)
}

/// The same expression with B(x; p+1, q) replaced by the fully regularized
/// I(x; p+1, q). This is the convention the published Table 1 follows.
pub fn beta_nu_table_convention(x: f64, p: f64, q: f64) -> Result<f64> {
    check_beta(x, p, q)?;
    beta_nu_with(x, p, q, inc_beta_reg(x, p + 1.0, q)?)
}

/// σ(a, b) for the normal density restricted to `interval`.
pub fn normal_sigma_closed(mu: f64, s: f64, interval: Interval) -> f64 {
    let (a, b) = (interval.a(), interval.b());
    let e = |t: f64| (-(t - mu).powi(2) / (2.0 * s * s)).exp();
    let mass = normal_cdf((b - mu) / s) - normal_cdf((a - mu) / s);
    mu - s / (2.0 * PI).sqrt() * (e(b) - e(a)) / mass
}

/// ν(x, t*) at c = 0 for the normal density restricted to `interval`.
pub fn normal_nu_closed(x: f64, mu: f64, s: f64, interval: Interval) -> Result<f64> {
    if !(s > 0.0) {
        return param(format!("normal scale must be positive, got {s}"));
    }
    interval.check_contains(x, "x")?;
    let (a, b) = (interval.a(), interval.b());
    let f = |t: f64| normal_cdf((t - mu) / s);
    let e = |t: f64| (-(t - mu).powi(2) / (2.0 * s * s)).exp();
    let k = s / (2.0 * PI).sqrt();
    let end = if x <= normal_sigma_closed(mu, s, interval) { b } else { a };
    Ok((-k * (e(end) - e(x)) + (mu - x) * (f(end) - f(x))) / (f(b) - f(a)))
}

/// σ(0, 1) for the standard normal weight: (1 − e^{−1/2}) / (φ(1)√(2π)).
pub fn standard_normal_unit_sigma() -> f64 {
    (1.0 - (-0.5f64).exp()) / (laplace(1.0) * (2.0 * PI).sqrt())
}

/// ν(x, t*) at c = 0 for the standard normal weight on [0, 1], written with
/// Laplace's function φ = Φ − 1/2.
pub fn standard_normal_unit_nu(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return param(format!("x = {x} outside [0, 1]"));
    }
    let r = 1.0 / (2.0 * PI).sqrt();
    let e = (-x * x / 2.0).exp();
    let phi1 = laplace(1.0);
    Ok(if x <= standard_normal_unit_sigma() {
        (-r * ((-0.5f64).exp() - e) - x * (phi1 - laplace(x))) / phi1
    } else {
        (-r * (1.0 - e) + x * laplace(x)) / phi1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::{arcsine_cdf, arcsine_cdf_shifted};
    use crate::weighted::nu;
    use crate::weights::Weight;
    use approx::assert_abs_diff_eq;

    #[test]
    fn beta_closed_examples() {
        assert_abs_diff_eq!(beta_nu_closed(0.0, 0.5, 0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(beta_nu_closed(0.5, 0.5, 0.5).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-13);
        // 0.1 − 0.5·I(0.4; 3/2, 1/2) + 0.4·I(0.4; 1/2, 1/2)
        let by_hand = 0.1 - 0.5 * arcsine_cdf_shifted(0.4) + 0.4 * arcsine_cdf(0.4);
        assert_abs_diff_eq!(beta_nu_closed(0.4, 0.5, 0.5).unwrap(), by_hand, epsilon = 1e-13);
        assert_abs_diff_eq!(by_hand, 0.212_348_781_931_632_7, epsilon = 1e-14);
    }

    #[test]
    fn table_convention_examples() {
        assert_abs_diff_eq!(beta_nu_table_convention(0.4, 0.5, 0.5).unwrap(), 0.150_335_250_602_855, epsilon = 1e-12);
        assert_abs_diff_eq!(beta_nu_table_convention(0.5, 0.5, 0.5).unwrap(), 0.068_309_886_183_791, epsilon = 1e-12);
        assert_abs_diff_eq!(beta_nu_table_convention(0.9, 0.5, 0.5).unwrap(), 0.111_469_208_180_188, epsilon = 1e-12);
    }

    #[test]
    fn beta_closed_matches_core_nu() {
        for (p, q) in [(0.5, 0.5), (2.0, 3.0), (0.7, 1.9), (3.5, 1.2)] {
            let w = Weight::beta(p, q).unwrap();
            for i in 0..=20 {
                let x = i as f64 / 20.0;
                let a = beta_nu_closed(x, p, q).unwrap();
                let b = nu(x, 0.0, &w).unwrap();
                assert!((a - b).abs() <= 1e-9, "p={p} q={q} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn normal_closed_examples() {
        let iv = Interval::unit();
        let sigma = 0.459_862_229_286_426_5;
        assert_abs_diff_eq!(normal_sigma_closed(0.0, 1.0, iv), sigma, epsilon = 1e-14);
        assert_abs_diff_eq!(standard_normal_unit_sigma(), sigma, epsilon = 1e-14);
        assert_abs_diff_eq!(normal_nu_closed(0.0, 0.0, 1.0, iv).unwrap(), sigma, epsilon = 1e-14);
        assert_abs_diff_eq!(normal_nu_closed(1.0, 0.0, 1.0, iv).unwrap(), 1.0 - sigma, epsilon = 1e-14);
    }

    #[test]
    fn normal_branches_meet_at_sigma() {
        let iv = Interval::new(-0.3, 1.7).unwrap();
        let (mu, s) = (0.4, 0.8);
        let sigma = normal_sigma_closed(mu, s, iv);
        let left = normal_nu_closed(sigma, mu, s, iv).unwrap();
        let right = normal_nu_closed(sigma + 1e-13, mu, s, iv).unwrap();
        assert_abs_diff_eq!(left, right, epsilon = 1e-10);
    }

    #[test]
    fn normal_closed_matches_core_nu() {
        for (mu, s, iv) in [
            (0.0, 1.0, Interval::unit()),
            (0.4, 0.8, Interval::new(-0.3, 1.7).unwrap()),
            (-2.0, 0.5, Interval::new(-1.0, 0.0).unwrap()),
        ] {
            let w = Weight::truncated_normal(mu, s, iv).unwrap();
            for x in iv.grid(21) {
                let a = normal_nu_closed(x, mu, s, iv).unwrap();
                let b = nu(x, 0.0, &w).unwrap();
                assert!((a - b).abs() <= 1e-9, "mu={mu} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn unit_specialization_matches_general_form() {
        for x in Interval::unit().grid(41) {
            let a = standard_normal_unit_nu(x).unwrap();
            let b = normal_nu_closed(x, 0.0, 1.0, Interval::unit()).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }
}
