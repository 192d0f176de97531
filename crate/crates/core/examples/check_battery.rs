//! Run the check battery, optionally restricted to one module.
//!
//! cargo run --release --example check_battery -- [module]

use fseries::cli::{run_verify_suite, VerifyOptions};

fn main() -> fseries::Result<()> {
    let only = Some(std::env::args().nth(1).unwrap_or_else(|| "contfrac".into()));
    let report = run_verify_suite(&VerifyOptions { seed: 0, only, fault: None })?;
    print!("{}", report.table().to_csv());
    println!("all passed: {}; failing: {:?}", report.passed, report.failing);
    Ok(())
}
