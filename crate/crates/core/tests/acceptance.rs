//! Acceptance battery: one PASS/FAIL line per criterion.
//!
//! Tolerances live next to each check in `fseries::cli::checks`. The
//! process fails on any FAIL outside `KNOWN_UNATTAINABLE`, and also if one
//! of those starts passing, so the list cannot go stale.

use fseries::cli::checks::{all_checks, run_check};
use fseries::cli::VerifyOptions;

/// Criteria that cannot hold for the bit-capped constructions; see README.
const KNOWN_UNATTAINABLE: &[&str] = &["c10b-liouville-divergence"];

fn main() {
    let opts = VerifyOptions::default();
    let mut unexpected = Vec::new();
    println!("running {} acceptance checks", all_checks().len());
    for spec in all_checks() {
        let r = run_check(&spec, &opts);
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:<30} measured={:<12.4e} tol={:<8.1e} {:>7.1}s  {}",
            r.id, r.measured, r.tolerance, r.seconds, r.detail
        );
        let known = KNOWN_UNATTAINABLE.contains(&r.id.as_str());
        if r.passed == known {
            unexpected.push(r.id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all results as expected (known-unattainable: {KNOWN_UNATTAINABLE:?})");
    } else {
        println!("acceptance: unexpected results for {unexpected:?}");
        std::process::exit(1);
    }
}
