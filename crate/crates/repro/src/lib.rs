//! Shared helpers for the acceptance runs in `tests/acceptance.rs`.

use std::f64::consts::PI;

use nctorus::gauge::winding_unchecked;
use nctorus::powers_rieffel::PRConfig;
use nctorus::{Complex64, TorusElement};

/// Default projection parameters at truncation `trunc`.
pub fn pr(trunc: usize) -> PRConfig {
    PRConfig::default().with_trunc(trunc)
}

/// `W[u]` without the unitarity guard; the defect is reported separately.
pub fn winding_number(u: &TorusElement) -> Complex64 {
    winding_unchecked(u).expect("compatible operands") / (24.0 * PI * PI)
}

/// Prints the single result line of a criterion.
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:>2} [{name}]: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}
