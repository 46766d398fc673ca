//! One test per acceptance criterion, each printing a PASS/FAIL line.
//! Runs the full tier; set `WG_ACCEPTANCE_LEVEL=quick` for the quick one.

use std::io::Write;

use weingarten::selftest::{run_criterion, Level, SelftestConfig};

fn check(id: u8) {
    let level = std::env::var("WG_ACCEPTANCE_LEVEL")
        .ok()
        .and_then(|s| Level::parse(&s))
        .unwrap_or(Level::Full);
    let report = run_criterion(id, &SelftestConfig::new(level));
    // bypasses libtest capture so the line shows without --nocapture
    let _ = writeln!(std::io::stdout().lock(), "{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_single_row_closed_form() {
    check(1);
}

#[test]
fn criterion_02_n2_closed_form() {
    check(2);
}

#[test]
fn criterion_03_vanishing() {
    check(3);
}

#[test]
fn criterion_04_asymptotic_diagonality() {
    check(4);
}

#[test]
fn criterion_05_leading_term() {
    check(5);
}

#[test]
fn criterion_06_geodesic_expansion() {
    check(6);
}

#[test]
fn criterion_07_mobius_estimates() {
    check(7);
}

#[test]
fn criterion_08_zonal_formula() {
    check(8);
}

#[test]
fn criterion_09_pole_containment() {
    check(9);
}

#[test]
fn criterion_10_monte_carlo() {
    check(10);
}

#[test]
fn criterion_11_symmetries() {
    check(11);
}
