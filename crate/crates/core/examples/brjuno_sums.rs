//! Brjuno-type sums, the κ_n sequence and the square-Brjuno verdict for a few
//! constructed numbers.
//!
//! cargo run --release --example brjuno_sums -- [depth]

use fseries::brjuno::{brjuno_report, construct_extreme_number, ExtremeKind};

fn main() -> fseries::Result<()> {
    let depth: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    for name in ["golden", "periodic:2", "periodic:1,2,3", "liouville:2", "star_violator"] {
        let kind: ExtremeKind = name.parse()?;
        let x = construct_extreme_number(&kind, depth + 4)?;
        let r = brjuno_report(&x.spec, depth)?;
        let sums: Vec<String> = r.brjuno_sums.iter().map(|(e, v)| format!("B{e}={:.4}", v.last().unwrap_or(&f64::NAN))).collect();
        println!(
            "{name:>15}: {} mu~{:.3} nu~{:.3} star={} starstar={} brackets={} verdict={}",
            sums.join(" "),
            r.mu_est,
            r.nu_est,
            r.star_ok,
            r.starstar_ok,
            r.brackets_hold(),
            r.verdict
        );
        if !x.saturated.is_empty() {
            println!("{:>15}  quotients capped at {} bits at indices {:?}", "", x.cap_bits, x.saturated);
        }
    }
    Ok(())
}
