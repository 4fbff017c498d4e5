use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{param, Error, Result};

// Kronrod abscissae on [0, 1]; the odd-indexed ones are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return param("quadrature tolerances must be positive");
        }
        if self.max_subdivisions < 1 {
            return param("max_subdivisions must be at least 1");
        }
        Ok(())
    }
}

/// Result of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err_estimate: f64,
}

struct Rule {
    value: f64,
    err: f64,
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Rule {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut res_g = f_center * WG[3];
    let mut res_k = f_center * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();

    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Rule { value, err }
}

#[derive(Debug)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    order: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    // Largest error first; ties resolved by creation order so the
    // subdivision sequence is fully deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Globally adaptive 7/15-point Gauss–Kronrod integration of `f` over
/// `[lo, hi]`.
///
/// Returns [`Error::NonConvergence`] with the best value and error estimate
/// when the tolerance is not met within `max_subdivisions` bisections.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return param(format!("integration limits must be finite, got [{lo}, {hi}]"));
    }
    if lo > hi {
        return param(format!("integration requires lo <= hi, got [{lo}, {hi}]"));
    }
    if lo == hi {
        return Ok(Quadrature {
            value: 0.0,
            err_estimate: 0.0,
        });
    }

    let first = gauss_kronrod_15(&f, lo, hi);
    let mut heap = BinaryHeap::new();
    let mut order = 0usize;
    heap.push(Segment {
        lo,
        hi,
        value: first.value,
        err: first.err,
        order,
    });
    let mut total = first.value;
    let mut total_err = first.err;

    let target = |total: f64| cfg.abs_tol.max(cfg.rel_tol * total.abs());

    let mut subdivisions = 0usize;
    while total_err > target(total) {
        if !total.is_finite() || subdivisions >= cfg.max_subdivisions {
            return Err(Error::NonConvergence {
                value: total,
                estimate: total_err,
            });
        }
        let seg = heap.pop().expect("heap never empties");
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            return Err(Error::NonConvergence {
                value: total,
                estimate: total_err,
            });
        }
        let left = gauss_kronrod_15(&f, seg.lo, mid);
        let right = gauss_kronrod_15(&f, mid, seg.hi);
        total += left.value + right.value - seg.value;
        total_err += left.err + right.err - seg.err;
        for (a, b, r) in [(seg.lo, mid, left), (mid, seg.hi, right)] {
            order += 1;
            heap.push(Segment {
                lo: a,
                hi: b,
                value: r.value,
                err: r.err,
                order,
            });
        }
        subdivisions += 1;
    }

    // Re-sum left to right; the running totals drift by rounding.
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let value = segs.iter().map(|s| s.value).sum::<f64>();
    let err_estimate = segs.iter().map(|s| s.err).sum::<f64>();
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            value,
            estimate: err_estimate,
        });
    }
    Ok(Quadrature {
        value,
        err_estimate,
    })
}

/// [`integrate`] returning only the value.
pub fn integrate_value<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<f64> {
    integrate(f, lo, hi, cfg).map(|q| q.value)
}

/// Integrates over `[lo, hi]` split at the given interior breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<f64> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&t| t > lo && t < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut acc = 0.0;
    let mut left = lo;
    for &t in cuts.iter().chain(std::iter::once(&hi)) {
        acc += integrate_value(&f, left, t, cfg)?;
        left = t;
    }
    Ok(acc)
}
