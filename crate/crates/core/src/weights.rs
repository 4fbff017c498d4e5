//! Weight functions on a bounded interval: density, partial masses
//! m(α, β), partial first moments M(α, β), interval means and the
//! normalized CDF.
//!
//! The built-in weights (uniform, Beta, truncated normal) use closed forms;
//! custom weights fall back to adaptive quadrature. Every weight also
//! exposes the generic quadrature path so the two can be cross-checked.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::interval::Interval;
use crate::numerics::quad::{integrate_pieces, QuadConfig};
use crate::numerics::special::{
    arcsine_cdf, arcsine_cdf_shifted, inc_beta_reg, ln_beta, normal_mass, normal_pdf,
};

/// Shared, thread-safe scalar function handle.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    /// Constant density 1/(b − a).
    Uniform,
    /// Beta(p, q) density on [0, 1].
    Beta { p: f64, q: f64 },
    /// Normal N(mu, s²) density restricted to the interval (not renormalized).
    TruncatedNormal { mu: f64, s: f64 },
    /// User density. `exponent_a`/`exponent_b` describe the endpoint
    /// behaviour w(t) ~ |t − endpoint|^exponent; negative values mark an
    /// integrable singularity that gets a power substitution.
    Custom {
        density: ScalarFn,
        exponent_a: f64,
        exponent_b: f64,
    },
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => write!(f, "Uniform"),
            Self::Beta { p, q } => write!(f, "Beta({p}, {q})"),
            Self::TruncatedNormal { mu, s } => write!(f, "TruncatedNormal({mu}, {s})"),
            Self::Custom {
                exponent_a,
                exponent_b,
                ..
            } => write!(f, "Custom(exponents {exponent_a}, {exponent_b})"),
        }
    }
}

/// A positive integrable weight on an interval, with its total mass and
/// mean cached at construction.
#[derive(Clone, Debug)]
pub struct Weight {
    kind: WeightKind,
    interval: Interval,
    total_mass: f64,
    mean: f64,
    ln_beta: f64,
    quad: QuadConfig,
}

impl Weight {
    pub fn uniform(interval: Interval) -> Self {
        Self {
            kind: WeightKind::Uniform,
            interval,
            total_mass: 1.0,
            mean: interval.midpoint(),
            ln_beta: 0.0,
            quad: QuadConfig::default(),
        }
    }

    pub fn beta(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return param(format!("Beta weight needs finite p, q > 0, got ({p}, {q})"));
        }
        Ok(Self {
            kind: WeightKind::Beta { p, q },
            interval: Interval::unit(),
            total_mass: 1.0,
            mean: p / (p + q),
            ln_beta: ln_beta(p, q),
            quad: QuadConfig::default(),
        })
    }

    pub fn truncated_normal(mu: f64, s: f64, interval: Interval) -> Result<Self> {
        if !(s > 0.0 && s.is_finite() && mu.is_finite()) {
            return param(format!("normal weight needs finite mu and s > 0, got ({mu}, {s})"));
        }
        let mut w = Self {
            kind: WeightKind::TruncatedNormal { mu, s },
            interval,
            total_mass: 1.0,
            mean: 0.0,
            ln_beta: 0.0,
            quad: QuadConfig::default(),
        };
        w.total_mass = w.mass_closed(interval.a(), interval.b());
        if !(w.total_mass > 0.0) {
            return param(format!(
                "normal weight has no representable mass on [{}, {}]",
                interval.a(),
                interval.b()
            ));
        }
        w.mean = w.first_moment_closed(interval.a(), interval.b()) / w.total_mass;
        Ok(w)
    }

    /// Builds a custom weight, computing its mass and mean by quadrature.
    ///
    /// Fails when an endpoint exponent is ≤ −1 (non-integrable), when the
    /// density is not finite and positive on an interior probe grid, or when
    /// the mass integral does not converge.
    pub fn custom(
        density: ScalarFn,
        interval: Interval,
        exponent_a: f64,
        exponent_b: f64,
    ) -> Result<Self> {
        if !(exponent_a > -1.0 && exponent_b > -1.0) {
            return param(format!(
                "endpoint exponents must exceed -1 for integrability, got ({exponent_a}, {exponent_b})"
            ));
        }
        let probes = interval.grid(259);
        for &t in &probes[1..probes.len() - 1] {
            let v = density(t);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain {
                    value: t,
                    reason: format!("custom density must be finite and positive inside, got {v}"),
                });
            }
        }
        let mut w = Self {
            kind: WeightKind::Custom {
                density,
                exponent_a,
                exponent_b,
            },
            interval,
            total_mass: 1.0,
            mean: 0.0,
            ln_beta: 0.0,
            quad: QuadConfig::default(),
        };
        let (a, b) = (interval.a(), interval.b());
        w.total_mass = w.mass_by_quadrature(a, b)?;
        if !(w.total_mass.is_finite() && w.total_mass > 0.0) {
            return param(format!("custom weight mass {} is not finite and positive", w.total_mass));
        }
        w.mean = w.first_moment_by_quadrature(a, b)? / w.total_mass;
        Ok(w)
    }

    /// Parses `uniform`, `beta:<p>,<q>` or `normal:<mu>,<s>`. Beta ignores
    /// `interval` and lives on [0, 1].
    pub fn parse(spec: &str, interval: Interval) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let nums = |args: Option<&str>| -> Result<Vec<f64>> {
            args.unwrap_or("")
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Malformed(format!("bad number {s:?} in weight {spec:?}")))
                })
                .collect()
        };
        match name {
            "uniform" if args.is_none() => Ok(Self::uniform(interval)),
            "beta" => match nums(args)?.as_slice() {
                [p, q] => Self::beta(*p, *q),
                _ => Err(Error::Malformed(format!("expected beta:<p>,<q>, got {spec:?}"))),
            },
            "normal" => match nums(args)?.as_slice() {
                [mu, s] => Self::truncated_normal(*mu, *s, interval),
                _ => Err(Error::Malformed(format!("expected normal:<mu>,<s>, got {spec:?}"))),
            },
            _ => Err(Error::Malformed(format!(
                "unknown weight {spec:?}; expected uniform, beta:<p>,<q> or normal:<mu>,<s>"
            ))),
        }
    }

    /// Replaces the quadrature tolerances used by numeric fallbacks.
    pub fn with_quad_config(mut self, cfg: QuadConfig) -> Self {
        self.quad = cfg;
        self
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn quad_config(&self) -> &QuadConfig {
        &self.quad
    }

    /// m(a, b).
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// σ(a, b).
    pub fn sigma(&self) -> f64 {
        self.mean
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.kind, WeightKind::Custom { .. })
    }

    /// Short label in the CLI grammar.
    pub fn label(&self) -> String {
        match &self.kind {
            WeightKind::Uniform => "uniform".into(),
            WeightKind::Beta { p, q } => format!("beta:{p},{q}"),
            WeightKind::TruncatedNormal { mu, s } => format!("normal:{mu},{s}"),
            WeightKind::Custom { .. } => "custom".into(),
        }
    }

    /// w(t). Endpoints are accepted only where the density is finite.
    pub fn density(&self, t: f64) -> Result<f64> {
        let (a, b) = (self.interval.a(), self.interval.b());
        if !(t >= a && t <= b) {
            return Err(Error::Domain {
                value: t,
                reason: format!("density evaluated outside [{a}, {b}]"),
            });
        }
        let v = self.density_unchecked(t);
        if !v.is_finite() {
            return Err(Error::Domain {
                value: t,
                reason: "density is unbounded at this endpoint".into(),
            });
        }
        Ok(v)
    }

    pub(crate) fn density_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            WeightKind::Uniform => 1.0 / self.interval.length(),
            WeightKind::Beta { p, q } => {
                ((p - 1.0) * t.ln() + (q - 1.0) * (-t).ln_1p() - self.ln_beta).exp()
            }
            WeightKind::TruncatedNormal { mu, s } => normal_pdf((t - mu) / s) / s,
            WeightKind::Custom { density, .. } => density(t),
        }
    }

    fn check_range(&self, alpha: f64, beta: f64) -> Result<()> {
        let (a, b) = (self.interval.a(), self.interval.b());
        if !(a <= alpha && alpha <= beta && beta <= b) {
            return param(format!(
                "subinterval [{alpha}, {beta}] must satisfy {a} <= alpha <= beta <= {b}"
            ));
        }
        Ok(())
    }

    /// m(α, β) = ∫_α^β w.
    pub fn mass(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.check_range(alpha, beta)?;
        if self.has_closed_form() {
            Ok(self.mass_closed(alpha, beta))
        } else {
            self.mass_by_quadrature(alpha, beta)
        }
    }

    /// M(α, β) = ∫_α^β t w(t) dt.
    pub fn first_moment(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.check_range(alpha, beta)?;
        if self.has_closed_form() {
            Ok(self.first_moment_closed(alpha, beta))
        } else {
            self.first_moment_by_quadrature(alpha, beta)
        }
    }

    /// σ(α, β) = M(α, β) / m(α, β).
    pub fn mean(&self, alpha: f64, beta: f64) -> Result<f64> {
        if !(alpha < beta) {
            return param(format!("mean needs alpha < beta, got [{alpha}, {beta}]"));
        }
        if alpha == self.interval.a() && beta == self.interval.b() {
            return Ok(self.mean);
        }
        let m = self.mass(alpha, beta)?;
        let big_m = self.first_moment(alpha, beta)?;
        Ok((big_m / m).clamp(alpha, beta))
    }

    /// G(t) = m(a, t) / m(a, b).
    pub fn cdf_normalized(&self, t: f64) -> Result<f64> {
        self.interval.check_contains(t, "t")?;
        if t == self.interval.a() {
            return Ok(0.0);
        }
        if t == self.interval.b() {
            return Ok(1.0);
        }
        Ok((self.mass(self.interval.a(), t)? / self.total_mass).clamp(0.0, 1.0))
    }

    /// Regularized Beta CDF pieces: I(t; p, q) and I(t; p+1, q).
    fn beta_cdfs(&self, t: f64, p: f64, q: f64) -> (f64, f64) {
        if p == 0.5 && q == 0.5 {
            (arcsine_cdf(t), arcsine_cdf_shifted(t))
        } else {
            // Arguments are range-checked by callers, so the only failure
            // mode is continued-fraction stagnation; fall back to NaN.
            (
                inc_beta_reg(t, p, q).unwrap_or(f64::NAN),
                inc_beta_reg(t, p + 1.0, q).unwrap_or(f64::NAN),
            )
        }
    }

    fn mass_closed(&self, alpha: f64, beta: f64) -> f64 {
        match &self.kind {
            WeightKind::Uniform => (beta - alpha) / self.interval.length(),
            WeightKind::Beta { p, q } => {
                let (p, q) = (*p, *q);
                self.beta_cdfs(beta, p, q).0 - self.beta_cdfs(alpha, p, q).0
            }
            WeightKind::TruncatedNormal { mu, s } => normal_mass((alpha - mu) / s, (beta - mu) / s),
            WeightKind::Custom { .. } => unreachable!("custom weights have no closed form"),
        }
    }

    fn first_moment_closed(&self, alpha: f64, beta: f64) -> f64 {
        match &self.kind {
            WeightKind::Uniform => (beta - alpha) * (beta + alpha) / (2.0 * self.interval.length()),
            WeightKind::Beta { p, q } => {
                let (p, q) = (*p, *q);
                // t·w_{p,q}(t) = (p/(p+q))·w_{p+1,q}(t)
                p / (p + q) * (self.beta_cdfs(beta, p, q).1 - self.beta_cdfs(alpha, p, q).1)
            }
            WeightKind::TruncatedNormal { mu, s } => {
                let (za, zb) = ((alpha - mu) / s, (beta - mu) / s);
                mu * normal_mass(za, zb) + s * (normal_pdf(za) - normal_pdf(zb))
            }
            WeightKind::Custom { .. } => unreachable!("custom weights have no closed form"),
        }
    }

    /// m(α, β) by adaptive quadrature of the density.
    pub fn mass_by_quadrature(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.check_range(alpha, beta)?;
        self.integrate_weighted(|_| 1.0, alpha, beta, &[])
    }

    /// M(α, β) by adaptive quadrature.
    pub fn first_moment_by_quadrature(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.check_range(alpha, beta)?;
        self.integrate_weighted(|t| t, alpha, beta, &[])
    }

    /// ∫_α^β h(t) w(t) dt, splitting at `breaks` and removing endpoint
    /// singularities of the weight by substitution.
    pub fn integrate_weighted<H: Fn(f64) -> f64>(
        &self,
        h: H,
        alpha: f64,
        beta: f64,
        breaks: &[f64],
    ) -> Result<f64> {
        self.integrate_mapped(h, alpha, beta, breaks, true)
    }

    /// ∫_α^β h(t) dt under the same endpoint substitution as
    /// [`integrate_weighted`](Self::integrate_weighted). Meant for integrands
    /// built from the weight's CDF, which inherit its endpoint behaviour.
    pub fn integrate_plain<H: Fn(f64) -> f64>(
        &self,
        h: H,
        alpha: f64,
        beta: f64,
        breaks: &[f64],
    ) -> Result<f64> {
        self.integrate_mapped(h, alpha, beta, breaks, false)
    }

    fn integrate_mapped<H: Fn(f64) -> f64>(
        &self,
        h: H,
        alpha: f64,
        beta: f64,
        breaks: &[f64],
        with_density: bool,
    ) -> Result<f64> {
        if alpha == beta {
            return Ok(0.0);
        }
        if alpha > beta {
            return param(format!("integration requires alpha <= beta, got [{alpha}, {beta}]"));
        }
        match &self.kind {
            WeightKind::Beta { p, q } => {
                // t = sin²θ, dt = sin 2θ dθ; w(t)dt = 2 sin^{2p−1}θ cos^{2q−1}θ / B(p,q) dθ.
                let (p, q) = (*p, *q);
                let theta = |t: f64| t.clamp(0.0, 1.0).sqrt().asin();
                let mapped: Vec<f64> = breaks.iter().map(|&t| theta(t)).collect();
                let ln_b = self.ln_beta;
                let g = |th: f64| {
                    let (s, c) = th.sin_cos();
                    let t = s * s;
                    let jac = if with_density {
                        2.0 * ((2.0 * p - 1.0) * s.ln() + (2.0 * q - 1.0) * c.ln() - ln_b).exp()
                    } else {
                        2.0 * s * c
                    };
                    h(t) * jac
                };
                let hi = if beta >= 1.0 { FRAC_PI_2 } else { theta(beta) };
                integrate_pieces(g, theta(alpha), hi, &mapped, &self.quad)
            }
            WeightKind::Custom {
                exponent_a,
                exponent_b,
                ..
            } => {
                let (a, b) = (self.interval.a(), self.interval.b());
                let f = |t: f64| {
                    if with_density {
                        h(t) * self.density_unchecked(t)
                    } else {
                        h(t)
                    }
                };
                let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&t| t > alpha && t < beta).collect();
                let sing_a = alpha == a && *exponent_a < 0.0;
                let sing_b = beta == b && *exponent_b < 0.0;
                if sing_a && sing_b {
                    cuts.push(0.5 * (alpha + beta));
                }
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let nodes: Vec<f64> = std::iter::once(alpha)
                    .chain(cuts)
                    .chain(std::iter::once(beta))
                    .collect();
                let mut acc = 0.0;
                let last = nodes.len() - 2;
                for (i, win) in nodes.windows(2).enumerate() {
                    let (lo, hi) = (win[0], win[1]);
                    acc += if i == 0 && sing_a {
                        // t = lo + (hi − lo)·s^k absorbs (t − a)^e when k(1 + e) ≥ 2.
                        let k = 2.0 / (1.0 + exponent_a);
                        let len = hi - lo;
                        integrate_pieces(
                            |s: f64| f(lo + len * s.powf(k)) * len * k * s.powf(k - 1.0),
                            0.0,
                            1.0,
                            &[],
                            &self.quad,
                        )?
                    } else if i == last && sing_b {
                        let k = 2.0 / (1.0 + exponent_b);
                        let len = hi - lo;
                        integrate_pieces(
                            |s: f64| f(hi - len * s.powf(k)) * len * k * s.powf(k - 1.0),
                            0.0,
                            1.0,
                            &[],
                            &self.quad,
                        )?
                    } else {
                        integrate_pieces(f, lo, hi, &[], &self.quad)?
                    };
                }
                Ok(acc)
            }
            _ => {
                let f = |t: f64| {
                    if with_density {
                        h(t) * self.density_unchecked(t)
                    } else {
                        h(t)
                    }
                };
                integrate_pieces(f, alpha, beta, breaks, &self.quad)
            }
        }
    }
}
