//! Evaluate F_k and G_k at a few abscissae with both summation methods and
//! report the values, certificates and agreement.
//!
//! cargo run --release --example series_oracles -- [k] [eps]

use fseries::analytic::series::{rational_abscissa, NAIVE_TERM_CAP};
use fseries::analytic::{eval_series_batch, Method};
use std::time::Instant;

fn main() -> fseries::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let k: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let eps: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1e-8);
    let xs = vec![
        rational_abscissa(1, 3),
        rational_abscissa(2, 5),
        rational_abscissa(3, 7919),
        rational_abscissa(1234, 9973),
        fseries::analytic::Abscissa::from_f64(0.618_033_988_749_894_8),
    ];
    let t = Instant::now();
    let naive = eval_series_batch(&xs, k, eps, Method::Naive, NAIVE_TERM_CAP)?;
    let t_naive = t.elapsed();
    let t = Instant::now();
    let hyp = eval_series_batch(&xs, k, 1e-13, Method::Hyperbola, 0)?;
    let t_hyp = t.elapsed();
    println!("x,F_naive,F_hyperbola,|dF|,bound,G_naive,G_hyperbola,|dG|,bound");
    for (x, ((nf, ng), (hf, hg))) in xs.iter().zip(naive.iter().zip(&hyp)) {
        println!(
            "{:.12},{:.15},{:.15},{:.2e},{:.2e},{:.15},{:.15},{:.2e},{:.2e}",
            x.to_f64(),
            nf.value,
            hf.value,
            (nf.value - hf.value).abs(),
            nf.error_bound + hf.error_bound,
            ng.value,
            hg.value,
            (ng.value - hg.value).abs(),
            ng.error_bound + hg.error_bound
        );
    }
    println!(
        "# naive: {} terms in {:.2?}; hyperbola: {} terms per point in {:.2?}",
        naive[0].0.terms_used, t_naive, hyp[0].0.terms_used, t_hyp
    );
    Ok(())
}
