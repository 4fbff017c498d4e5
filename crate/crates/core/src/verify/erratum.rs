//! Structured discrepancies between recomputed values and the published
//! ones.

use crate::error::Result;
use crate::verify::table1::table1;
use crate::weighted::KernelPoint;
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq)]
pub struct ErratumFinding {
    pub id: String,
    pub location: String,
    pub description: String,
    /// Recomputed value; `None` for findings without a numeric payload.
    pub computed: Option<f64>,
    /// Published value.
    pub printed: Option<f64>,
}

impl ErratumFinding {
    pub(crate) fn table_cell(x: f64, column: &str, computed: f64, printed: f64) -> Self {
        let description = match column {
            "nu" => "nu column uses the fully regularized I(x;p+1,q) instead of B(x;p+1,q)/B(p,q)",
            "lhs" => "lower bound column inherits the understated nu",
            "rhs" => "upper bound column inherits the understated nu",
            _ => "published value differs from the recomputed one",
        };
        Self {
            id: "E1".into(),
            location: format!("table1 x={x}, {column}"),
            description: description.into(),
            computed: Some(computed),
            printed: Some(printed),
        }
    }
}

/// Arcsine weight at x = 0.4, c = 1: the argument of ω̃ in the published
/// c = 1 majorant corollary is 2ν; the general theorem gives ½‖P‖₁ = ν.
const E2_X: f64 = 0.4;

/// Every known finding: E1 per table cell, then E2 and E3.
pub fn erratum_report() -> Result<Vec<ErratumFinding>> {
    let (_, mut out) = table1(0.1)?;

    let w = Weight::beta(0.5, 0.5)?;
    let kp = KernelPoint::new(E2_X, 1.0, &w)?;
    out.push(ErratumFinding {
        id: "E2".into(),
        location: format!("majorant corollary c=1, arcsine weight x={E2_X}"),
        description: "argument of the majorant printed as (2/m)∫(t-x)w = 2nu; the theorem at c=1 gives nu".into(),
        computed: Some(crate::majorant::majorant_argument(&kp)),
        printed: Some(2.0 * kp.nu),
    });

    out.push(ErratumFinding {
        id: "E3".into(),
        location: "final majorant corollary (c=0)".into(),
        description: "relation printed as '=' between |f(x) - weighted mean| and 2 omega~(f; .); only '<=' holds".into(),
        computed: None,
        printed: None,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn e1_at_half() {
        let report = erratum_report().unwrap();
        let f = report
            .iter()
            .find(|e| e.id == "E1" && e.location == "table1 x=0.5, nu")
            .expect("finding at 0.5");
        assert_abs_diff_eq!(f.computed.unwrap(), 0.159_154_943_091_895, epsilon = 1e-12);
        assert_abs_diff_eq!(f.printed.unwrap(), 0.068_309_886_183_791, epsilon = 1e-15);
    }

    #[test]
    fn e1_flags_every_nonzero_row_and_not_zero() {
        let report = erratum_report().unwrap();
        let nu_rows: Vec<_> = report
            .iter()
            .filter(|e| e.id == "E1" && e.location.ends_with(", nu"))
            .collect();
        assert_eq!(nu_rows.len(), 10);
        assert!(report.iter().all(|e| !e.location.starts_with("table1 x=0,")));
        assert!(report.iter().all(|e| e.location.starts_with("table1") || e.id != "E1"));
    }

    #[test]
    fn e2_and_e3() {
        let report = erratum_report().unwrap();
        let e2 = report.iter().find(|e| e.id == "E2").unwrap();
        assert_abs_diff_eq!(e2.printed.unwrap(), 2.0 * e2.computed.unwrap(), epsilon = 1e-15);
        let w = Weight::beta(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(e2.computed.unwrap(), crate::weighted::nu(E2_X, 1.0, &w).unwrap(), epsilon = 1e-15);
        let e3 = report.iter().find(|e| e.id == "E3").unwrap();
        assert!(e3.computed.is_none() && e3.printed.is_none());
    }
}
