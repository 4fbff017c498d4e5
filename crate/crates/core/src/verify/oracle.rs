//! Brute-force reference values computed straight from the definitions with
//! tanh-sinh quadrature and bisection. Nothing here calls the closed forms,
//! the Gauss–Kronrod integrator or the Brent solver.

use std::f64::consts::PI;

use crate::error::Result;
use crate::numerics::oracle::tanh_sinh;
use crate::weights::{Weight, WeightKind};

const TOL: f64 = 1e-13;

/// Raw density as a function of (t, distance to a, distance to b).
struct RawDensity<'w> {
    w: &'w Weight,
    beta_norm: f64,
}

impl<'w> RawDensity<'w> {
    fn new(w: &'w Weight) -> Result<Self> {
        let beta_norm = match w.kind() {
            WeightKind::Beta { p, q } => {
                let (p, q) = (*p, *q);
                tanh_sinh(|_, da, db| da.powf(p - 1.0) * db.powf(q - 1.0), 0.0, 1.0, TOL)?
            }
            _ => 1.0,
        };
        Ok(Self { w, beta_norm })
    }

    fn eval(&self, t: f64, to_a: f64, to_b: f64) -> f64 {
        match self.w.kind() {
            WeightKind::Uniform => 1.0 / self.w.interval().length(),
            WeightKind::Beta { p, q } => to_a.powf(p - 1.0) * to_b.powf(q - 1.0) / self.beta_norm,
            WeightKind::TruncatedNormal { mu, s } => {
                let z = (t - mu) / s;
                (-0.5 * z * z).exp() / (s * (2.0 * PI).sqrt())
            }
            WeightKind::Custom { density, .. } => density(t),
        }
    }

    /// ∫_α^β h(t) w(t) dt.
    fn integrate<H: Fn(f64) -> f64>(&self, h: H, alpha: f64, beta: f64) -> Result<f64> {
        let (a, b) = (self.w.interval().a(), self.w.interval().b());
        tanh_sinh(
            |t, d_lo, d_hi| {
                // Near an integration end, measure from the weight's end
                // through that end so a singularity just outside keeps its
                // distance.
                let to_a = if d_lo <= d_hi { (alpha - a) + d_lo } else { t - a };
                let to_b = if d_hi < d_lo { (b - beta) + d_hi } else { b - t };
                h(t) * self.eval(t, to_a, to_b)
            },
            alpha,
            beta,
            TOL,
        )
    }
}

/// Reference evaluator bound to one weight.
pub struct Oracle<'w> {
    density: RawDensity<'w>,
    total: f64,
}

impl<'w> Oracle<'w> {
    pub fn new(w: &'w Weight) -> Result<Self> {
        let density = RawDensity::new(w)?;
        let (a, b) = (w.interval().a(), w.interval().b());
        let total = density.integrate(|_| 1.0, a, b)?;
        Ok(Self { density, total })
    }

    fn weight(&self) -> &Weight {
        self.density.w
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn mass(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.density.integrate(|_| 1.0, alpha, beta)
    }

    pub fn first_moment(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.density.integrate(|t| t, alpha, beta)
    }

    pub fn sigma(&self) -> Result<f64> {
        let iv = self.weight().interval();
        Ok(self.first_moment(iv.a(), iv.b())? / self.total)
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(self.mass(self.weight().interval().a(), t)? / self.total)
    }

    /// t* by plain bisection on the level equation.
    pub fn t_star(&self, x: f64, c: f64) -> Result<f64> {
        let iv = self.weight().interval();
        let sigma = self.sigma()?;
        let u = c * (x - sigma) / iv.length();
        let (mut lo, mut hi, level) = if x <= sigma { (x, iv.b(), 1.0 + u) } else { (iv.a(), x, u) };
        if level <= 0.0 {
            return Ok(lo);
        }
        if level >= 1.0 {
            return Ok(hi);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid)? < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// ν(x, t*) straight from its integral definition.
    pub fn nu(&self, x: f64, c: f64) -> Result<f64> {
        let ts = self.t_star(x, c)?;
        let v = if ts >= x {
            self.density.integrate(|t| t - x, x, ts)?
        } else {
            self.density.integrate(|t| x - t, ts, x)?
        };
        Ok(v / self.total)
    }

    /// ∫ |P(x, t)| dt with the CDF inside the kernel also integrated by the oracle.
    pub fn kernel_l1(&self, x: f64, c: f64) -> Result<f64> {
        let iv = self.weight().interval();
        let sigma = self.sigma()?;
        let u = c * (x - sigma) / iv.length();
        let ts = self.t_star(x, c)?;
        let mut cuts = vec![iv.a(), x.min(ts), x.max(ts), iv.b()];
        cuts.dedup();
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            let piece = tanh_sinh(
                |t, _, _| {
                    let g = self.cdf(t).unwrap_or(f64::NAN);
                    (if t < x { g - u } else { g - 1.0 - u }).abs()
                },
                w[0],
                w[1],
                1e-11,
            )?;
            acc += piece;
        }
        Ok(acc)
    }

    /// (1/m) ∫ f w.
    pub fn weighted_average<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let iv = self.weight().interval();
        Ok(self.density.integrate(f, iv.a(), iv.b())? / self.total)
    }
}

/// I(x; p, q) as a ratio of two tanh-sinh integrals.
pub fn inc_beta_oracle(x: f64, p: f64, q: f64) -> Result<f64> {
    let kernel = |to_zero: f64, to_one: f64| to_zero.powf(p - 1.0) * to_one.powf(q - 1.0);
    let full = tanh_sinh(|_, da, db| kernel(da, db), 0.0, 1.0, TOL)?;
    let part = tanh_sinh(
        |t, da, db| kernel(da, if x == 1.0 { db } else { 1.0 - t }),
        0.0,
        x,
        TOL,
    )?;
    Ok(part / full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use approx::assert_abs_diff_eq;

    #[test]
    fn arcsine_reference_values() {
        let w = Weight::beta(0.5, 0.5).unwrap();
        let o = Oracle::new(&w).unwrap();
        assert_abs_diff_eq!(o.total_mass(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(o.mass(0.0, 0.4).unwrap(), 0.435_905_783_151_025_1, epsilon = 1e-12);
        assert_abs_diff_eq!(o.first_moment(0.0, 0.4).unwrap(), 0.062_013_531_328_777_32, epsilon = 1e-12);
        assert_abs_diff_eq!(o.nu(0.5, 0.0).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-12);
        assert_abs_diff_eq!(o.nu(0.4, 0.0).unwrap(), 0.212_348_781_931_632_7, epsilon = 1e-11);
    }

    #[test]
    fn normal_reference_values() {
        let w = Weight::truncated_normal(0.0, 1.0, Interval::unit()).unwrap();
        let o = Oracle::new(&w).unwrap();
        assert_abs_diff_eq!(o.total_mass(), 0.341_344_746_068_542_9, epsilon = 1e-13);
        assert_abs_diff_eq!(o.sigma().unwrap(), 0.459_862_229_286_426_5, epsilon = 1e-12);
    }

    #[test]
    fn incomplete_beta_reference() {
        let v = inc_beta_oracle(0.3, 2.0, 3.0).unwrap();
        let x: f64 = 0.3;
        assert_abs_diff_eq!(v, 6.0 * x * x - 8.0 * x.powi(3) + 3.0 * x.powi(4), epsilon = 1e-13);
    }
}
