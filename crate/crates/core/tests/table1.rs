//! The Beta(1/2, 1/2), f(t) = t²/2 reference table.

use ostrowski::verify::table1::{table1, PUBLISHED};

#[test]
fn actual_column_reproduced() {
    let (rows, _) = table1(0.1).unwrap();
    for (r, p) in rows.iter().zip(PUBLISHED.iter()) {
        assert!((r.x - p[0]).abs() < 1e-15);
        assert!((r.actual - p[4]).abs() <= 1e-10, "x={}", r.x);
        // Closed form of the column: x²/2 − 3/16.
        assert!((r.actual - (r.x * r.x / 2.0 - 0.1875)).abs() <= 1e-12);
    }
}

#[test]
fn table_convention_reproduces_printed_nu() {
    let (rows, _) = table1(0.1).unwrap();
    for r in &rows {
        assert!((r.nu_table_convention - r.paper_nu.unwrap()).abs() <= 5e-6, "x={}", r.x);
    }
}

#[test]
fn corrected_nu_gap_is_structural() {
    let (rows, _) = table1(0.1).unwrap();
    for r in &rows[1..] {
        assert!((r.nu_corrected - r.paper_nu.unwrap()).abs() > 1e-3, "x={}", r.x);
    }
    assert_eq!(rows[0].nu_corrected, rows[0].paper_nu.unwrap());
}

#[test]
fn both_sandwiches_hold() {
    let (rows, _) = table1(0.1).unwrap();
    for r in &rows {
        let (plo, phi) = (r.paper_lhs.unwrap(), r.paper_rhs.unwrap());
        assert!(plo <= r.actual && r.actual <= phi, "printed bounds at x={}", r.x);
        assert!(r.lhs <= r.actual && r.actual <= r.rhs, "corrected bounds at x={}", r.x);

        let (lo_margin, hi_margin) = (r.actual - r.lhs, r.rhs - r.actual);
        let (plo_margin, phi_margin) = (r.actual - plo, phi - r.actual);
        if r.x == 0.0 {
            assert!((lo_margin - plo_margin).abs() < 1e-15 && (hi_margin - phi_margin).abs() < 1e-15);
        } else {
            assert!(lo_margin > plo_margin && hi_margin > phi_margin, "x={}", r.x);
        }
    }
    let half = &rows[5];
    assert!(half.actual - half.paper_lhs.unwrap() < 6e-3);
}

#[test]
fn finer_grid_keeps_published_rows() {
    let (coarse, _) = table1(0.1).unwrap();
    let (fine, errata) = table1(0.02).unwrap();
    assert_eq!(fine.len(), 51);
    for (i, r) in coarse.iter().enumerate() {
        assert_eq!(fine[5 * i].paper_nu, r.paper_nu);
        assert!((fine[5 * i].nu_corrected - r.nu_corrected).abs() < 1e-15);
    }
    assert_eq!(errata.len(), 30);
}
