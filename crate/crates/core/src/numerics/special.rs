//! Normal distribution functions, the log-beta function, and the
//! regularized incomplete beta function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{param, Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Standard normal density.
#[inline]
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// Standard normal CDF Φ.
#[inline]
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Φ(b) − Φ(a), evaluated on the tail where it loses no digits.
pub fn normal_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        0.5 * (libm::erfc(a * FRAC_1_SQRT_2) - libm::erfc(b * FRAC_1_SQRT_2))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b * FRAC_1_SQRT_2) - libm::erfc(-a * FRAC_1_SQRT_2))
    } else {
        0.5 * (libm::erf(b * FRAC_1_SQRT_2) - libm::erf(a * FRAC_1_SQRT_2))
    }
}

/// Laplace's function φ(x) = Φ(x) − 1/2.
#[inline]
pub fn laplace(x: f64) -> f64 {
    0.5 * libm::erf(x * FRAC_1_SQRT_2)
}

pub fn ln_beta(p: f64, q: f64) -> f64 {
    libm::lgamma(p) + libm::lgamma(q) - libm::lgamma(p + q)
}

/// Regularized incomplete beta for the arcsine case, I(x; 1/2, 1/2).
#[inline]
pub fn arcsine_cdf(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x > 0.5 {
        // asin is ill-conditioned near 1; reflect so 1 − x stays exact.
        1.0 - 2.0 / PI * (1.0 - x).sqrt().asin()
    } else {
        2.0 / PI * x.sqrt().asin()
    }
}

/// I(x; 3/2, 1/2), the normalized partial first moment of the arcsine law
/// divided by its mean 1/2.
#[inline]
pub fn arcsine_cdf_shifted(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let root = (x * (1.0 - x)).sqrt();
    if x > 0.5 {
        1.0 - 2.0 / PI * ((1.0 - x).sqrt().asin() + root)
    } else {
        2.0 / PI * (x.sqrt().asin() - root)
    }
}

const CF_MAX_ITER: usize = 1000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(p: f64, q: f64, x: f64) -> Result<f64> {
    let qab = p + q;
    let qap = p + 1.0;
    let qam = p - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        value: h,
        estimate: f64::NAN,
    })
}

/// Regularized incomplete beta I(x; p, q) = ∫₀ˣ t^{p−1}(1−t)^{q−1} dt / B(p, q).
pub fn inc_beta_reg(x: f64, p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return param(format!("incomplete beta needs p, q > 0, got ({p}, {q})"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            reason: "incomplete beta argument must lie in [0, 1]".into(),
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = p * x.ln() + q * (-x).ln_1p() - ln_beta(p, q);
    if x < (p + 1.0) / (p + q + 2.0) {
        Ok(ln_front.exp() * beta_continued_fraction(p, q, x)? / p)
    } else {
        Ok(1.0 - ln_front.exp() * beta_continued_fraction(q, p, 1.0 - x)? / q)
    }
}
