//! One-sided difference quotients of F₂ and G₂ at p/q, compared with the
//! predicted log coefficient, slopes and jump.
//!
//! cargo run --release --example rational_scan -- [p] [q]

use fseries::cli::run_scan_rational;

fn main() -> fseries::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (p, q) = (args.first().copied().unwrap_or(1), args.get(1).copied().unwrap_or(3));
    let grid: Vec<f64> = (10..=24).map(|e| 2f64.powi(-e)).collect();
    let s = run_scan_rational(p, q, &grid, 1e-12)?;
    print!("{}", s.table().to_csv());
    println!("log slope {:.6} (predicted {:.6})", s.fitted_log_slope, s.predicted.f2_log_coefficient);
    println!("G2 slopes right {:.6} left {:.6} (predicted {:.6} {:.6})", s.fitted_right_slope, s.fitted_left_slope, s.predicted.g2_right_slope, s.predicted.g2_left_slope);
    println!("jump {:.6} (predicted {:.6})", s.fitted_jump, s.predicted.jump);
    Ok(())
}
