//! Divisor sums, Bernoulli numbers and the constants ζ(2)ζ(k+1).
//!
//! cargo run --release --example divisor_arithmetic

use fseries::arith::{bernoulli, build_divisor_table, sigma, zeta, zeta_product_constant};

fn main() -> fseries::Result<()> {
    let t = build_divisor_table(1, 30)?;
    let row: Vec<String> = (1..=12).map(|n| t.get(n).to_string()).collect();
    println!("sigma_1(1..12) = {}", row.join(" "));
    println!("sigma_3(360) = {}", sigma(3, 360)?);

    for k in [2i64, 4, 6] {
        let b = bernoulli(k)?;
        println!("B_{k} = {b}, -2k/B_k = {}", -num_rational::BigRational::from_integer((2 * k).into()) / &b);
    }
    for k in [2u32, 4, 6] {
        let (z, err) = zeta(k + 1)?;
        println!("zeta({}) = {z:.15} (+- {err:.1e}), zeta(2)zeta({}) = {:.15}", k + 1, k + 1, zeta_product_constant(k as i64)?);
    }
    Ok(())
}
