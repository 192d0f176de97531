//! Random pairs near a quadratic irrational: |F₂(x) − F₂(y)| against
//! |x − y| log(1/|x − y|).
//!
//! cargo run --release --example modulus_of_continuity -- [pairs] [seed]

use fseries::brjuno::{construct_extreme_number, ExtremeKind};
use fseries::cli::run_moc_sampler;

fn main() -> fseries::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let pairs = args.first().copied().unwrap_or(200) as usize;
    let seed = args.get(1).copied().unwrap_or(7);
    for name in ["golden", "periodic:2"] {
        let x = construct_extreme_number(&name.parse::<ExtremeKind>()?, 40)?;
        let s = run_moc_sampler(&x.spec, pairs, seed, 1e-11)?;
        println!(
            "{name}: {} pairs, median ratio {:.4}, max {:.4}, max/running median {:.3}, widest decade {:.4}, narrowest {:.4}",
            s.rows.len(),
            s.median_ratio,
            s.max_ratio,
            s.max_over_running_median,
            s.first_decade_max,
            s.last_decade_max
        );
    }
    Ok(())
}
