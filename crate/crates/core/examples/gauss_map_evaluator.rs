//! F₂ and G₂ from the iterated one-step identities, next to the direct
//! hyperbola evaluator.
//!
//! cargo run --release --example gauss_map_evaluator

use fseries::analytic::{eval_series, Abscissa, Method};
use fseries::contfrac::{parse_real, RealSpec};
use fseries::funceq::eval_f2g2_cf;

fn main() -> fseries::Result<()> {
    for s in ["rational:1234/9973", "rational:5/7", "cf:[1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]", "cf:[2,2,2,2,2,2,2,2,2,2,2,2,2,2,2]"] {
        let spec: RealSpec = s.parse()?;
        let (f, g, terms) = eval_f2g2_cf(&spec, 1e-10, 200)?;
        let x = Abscissa::from_rational(parse_real(&spec)?.value());
        let (hf, hg) = eval_series(x, 2, 1e-12, Method::Hyperbola)?;
        println!(
            "{s}: depth {} F2 {:.12} (diff {:.1e}) G2 {:.12} (diff {:.1e})",
            terms.depth_used,
            f.value,
            (f.value - hf.value).abs(),
            g.value,
            (g.value - hg.value).abs()
        );
    }
    Ok(())
}
