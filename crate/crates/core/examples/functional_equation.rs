//! Period constants f_γ, cusp data and residuals of the real-line
//! transformation law for a few matrices.
//!
//! cargo run --release --example functional_equation

use fseries::funceq::{compute_f_gamma, local_expansion, phi2_transform_check, SL2Matrix};
use std::f64::consts::PI;

fn main() -> fseries::Result<()> {
    for (c, d) in [(1, 0), (2, 1), (3, 1)] {
        let g = compute_f_gamma(c, d, 1e-10)?;
        println!(
            "({c},{d}): f/(i pi^3) = {:.10}  g at cusp = {:.8}{:+.8}i",
            g.f_gamma.im / PI.powi(3),
            g.g_gamma_at_cusp.re,
            g.g_gamma_at_cusp.im
        );
    }
    for (x, (c, d)) in [(0.3, (1, 0)), (0.51, (2, 1)), (0.2, (3, 1))] {
        let g = if c == 1 && d == 0 { SL2Matrix::s() } else { SL2Matrix::from_bottom_row(c, d)? };
        let r = phi2_transform_check(x, &g, 1e-9, 10_000_000)?;
        println!("x={x} ({c},{d}): residual {:.2e} certificate {:.2e}", r.residual, r.certificate);
    }
    for (p, q) in [(0, 1), (1, 2), (2, 5)] {
        let e = local_expansion(p, q, 1e-10)?;
        println!("{p}/{q}: G2 slopes {:.6} / {:.6}, jump {:.6}, F2 log coefficient {:.6}", e.g2_right_slope, e.g2_left_slope, e.jump, e.f2_log_coefficient);
    }
    Ok(())
}
