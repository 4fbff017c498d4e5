//! The Beta(1/2, 1/2), f(t) = t²/2 reference table: recomputed rows next
//! to the published values.

use crate::error::{param, Result};
use crate::function::FunctionSpec;
use crate::interval::Interval;
use crate::verify::closed::beta_nu_table_convention;
use crate::verify::erratum::ErratumFinding;
use crate::weighted::{functional_l, nu};
use crate::weights::Weight;

/// Discrepancies above this are structural, not rounding.
pub const ERRATUM_TOL: f64 = 5e-6;

/// Published rows: x, ν̃, l.h.s., r.h.s., f(x) − ∫ w f.
pub const PUBLISHED: [[f64; 5]; 11] = [
    [0.0, 0.500000000000000, -0.500000000000000, 0.0, -0.187500000000000],
    [0.1, 0.406636443481054, -0.406636443481054, 0.006636443481054, -0.182500000000000],
    [0.2, 0.318514120706339, -0.318514120706339, 0.018514120706339, -0.167500000000000],
    [0.3, 0.233428745882118, -0.233428745882118, 0.033428745882118, -0.142500000000000],
    [0.4, 0.150335250602855, -0.150335250602855, 0.050335250602855, -0.107500000000000],
    [0.5, 0.068309886183791, -0.068309886183791, 0.068309886183791, -0.062500000000000],
    [0.6, 0.086241033753880, -0.086241033753880, 0.186241033753880, -0.007500000000000],
    [0.7, 0.102438865447664, -0.102438865447664, 0.302438865447664, 0.057500000000000],
    [0.8, 0.113681356007205, -0.113681356007205, 0.413681356007205, 0.132500000000000],
    [0.9, 0.111469208180188, -0.111469208180188, 0.511469208180188, 0.217500000000000],
    [1.0, 0.0, 0.0, 0.500000000000000, 0.312500000000000],
];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub x: f64,
    pub nu_corrected: f64,
    pub nu_table_convention: f64,
    /// Lower bound from the corrected ν.
    pub lhs: f64,
    /// Upper bound from the corrected ν.
    pub rhs: f64,
    pub actual: f64,
    pub paper_nu: Option<f64>,
    pub paper_lhs: Option<f64>,
    pub paper_rhs: Option<f64>,
    pub paper_actual: Option<f64>,
}

pub const P: f64 = 0.5;
pub const Q: f64 = 0.5;
pub const GAMMA: f64 = 0.0;
pub const BIG_GAMMA: f64 = 1.0;

fn published_row(x: f64) -> Option<&'static [f64; 5]> {
    PUBLISHED.iter().find(|r| (r[0] - x).abs() < 1e-12)
}

/// Rows on the grid x = 0, step, 2·step, …, 1 plus the discrepancies
/// against the published values.
pub fn table1(step: f64) -> Result<(Vec<Table1Row>, Vec<ErratumFinding>)> {
    if !(step > 0.0 && step <= 1.0) {
        return param(format!("step must lie in (0, 1], got {step}"));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 {
        return param(format!("step {step} does not divide 1"));
    }
    let n = n as usize;
    let w = Weight::beta(P, Q)?;
    let f = FunctionSpec::polynomial(vec![0.0, 0.0, 0.5], Interval::unit())?;
    let sigma = w.sigma();

    let mut rows = Vec::with_capacity(n + 1);
    let mut errata = Vec::new();
    for i in 0..=n {
        let x = i as f64 / n as f64;
        let nu_corrected = nu(x, 0.0, &w)?;
        let drift = x - sigma;
        let published = published_row(x);
        let row = Table1Row {
            x,
            nu_corrected,
            nu_table_convention: beta_nu_table_convention(x, P, Q)?,
            lhs: drift * GAMMA + (GAMMA - BIG_GAMMA) * nu_corrected,
            rhs: drift * BIG_GAMMA + (BIG_GAMMA - GAMMA) * nu_corrected,
            actual: functional_l(&f, x, 0.0, &w)?,
            paper_nu: published.map(|r| r[1]),
            paper_lhs: published.map(|r| r[2]),
            paper_rhs: published.map(|r| r[3]),
            paper_actual: published.map(|r| r[4]),
        };
        for (column, computed, printed) in [
            ("nu", row.nu_corrected, row.paper_nu),
            ("lhs", row.lhs, row.paper_lhs),
            ("rhs", row.rhs, row.paper_rhs),
            ("actual", row.actual, row.paper_actual),
        ] {
            let Some(printed) = printed else { continue };
            if (computed - printed).abs() > ERRATUM_TOL {
                errata.push(ErratumFinding::table_cell(x, column, computed, printed));
            }
        }
        rows.push(row);
    }
    Ok((rows, errata))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn endpoints() {
        let (rows, _) = table1(0.1).unwrap();
        assert_eq!(rows.len(), 11);
        let first = &rows[0];
        assert_abs_diff_eq!(first.actual, -0.1875, epsilon = 1e-12);
        assert_abs_diff_eq!(first.lhs, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(first.rhs, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(first.nu_corrected, 0.5, epsilon = 1e-14);
        let last = &rows[10];
        assert_abs_diff_eq!(last.actual, 0.3125, epsilon = 1e-12);
        assert_abs_diff_eq!(last.nu_corrected, 0.5, epsilon = 1e-14);
        assert_eq!(last.paper_nu, Some(0.0));
        let nine = &rows[9];
        assert_abs_diff_eq!(nine.actual, 0.2175, epsilon = 1e-12);
        assert!((nine.nu_table_convention - 0.111469208).abs() < 5e-7);
    }

    #[test]
    fn finer_grid_only_labels_published_points() {
        let (rows, _) = table1(0.05).unwrap();
        assert_eq!(rows.len(), 21);
        assert!(rows[1].paper_nu.is_none());
        assert_eq!(rows[2].paper_nu, Some(0.406636443481054));
    }

    #[test]
    fn rejects_bad_step() {
        assert!(table1(0.3).is_err());
        assert!(table1(0.0).is_err());
        assert!(table1(1.5).is_err());
    }

    #[test]
    fn no_finding_at_zero() {
        let (_, errata) = table1(0.1).unwrap();
        assert!(errata.iter().all(|e| !e.location.contains("x=0,")));
        assert!(errata.iter().all(|e| !e.location.contains("actual")));
    }
}
