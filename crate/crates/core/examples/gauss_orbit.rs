//! Gauss-map orbit of a rational: quotients, convergents, tails and the
//! products β_n, with the exact identities checked along the way.
//!
//! cargo run --release --example gauss_orbit -- [p/q]

use fseries::contfrac::{expand_cf, orbit_identity_failures};
use num_rational::BigRational;

fn main() -> fseries::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "355/1133".into());
    let x: BigRational = arg.parse().map_err(|_| fseries::Error::Parse(format!("bad rational {arg:?}")))?;
    let o = expand_cf(&x, 64)?;
    println!("x = {x}, depth {}, terminated {}", o.depth(), o.terminated());
    println!("n,a_n,p_n,q_n,T^n x,beta_n");
    for n in 0..=o.depth() {
        let a = if n == 0 { "-".to_string() } else { o.a(n).to_string() };
        println!("{n},{a},{},{},{:.12},{:.6e}", o.p(n as i64), o.q(n as i64), o.t_f64(n), o.beta_f64(n as i64));
    }
    let bad = orbit_identity_failures(&o);
    println!("identity failures: {}", bad.len());
    for b in bad {
        println!("  {b}");
    }
    Ok(())
}
