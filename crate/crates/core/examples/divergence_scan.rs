//! Difference quotients of F₂ along h_n → 0 at irrational points.
//! Rows below binary64 resolution carry only the exact interval checks.
//!
//! cargo run --release --example divergence_scan

use fseries::brjuno::{construct_extreme_number, divergence_scan, ExtremeKind};

fn main() -> fseries::Result<()> {
    for (name, len, ns) in [("golden", 30, vec![1, 5, 9, 13, 17, 21]), ("periodic:2", 30, vec![1, 5, 9, 13]), ("liouville:2", 8, vec![1, 3, 5])] {
        let x = construct_extreme_number(&name.parse::<ExtremeKind>()?, len)?;
        println!("{name}");
        for r in divergence_scan(&x.spec, &ns)? {
            let dq = r.dq.map_or("-".to_string(), |v| format!("{v:.6} +- {:.1e}", r.dq_error));
            println!("  n={:>2} ln h={:>12.4e} brackets={} dq={dq} {}", r.n, r.ln_h, r.bracket_ok(), r.note);
        }
    }
    Ok(())
}
