//! The sawtooth series L_k(x) = 2π² Σ_r ((rx))/r^k and the integral route
//! G_k(x) = ∫₀ˣ L_k(t) dt + ζ(2)ζ(k+1).
//!
//! ((y)) = {y} − 1/2 off the integers and 0 on them, so L_k is odd.

use num_traits::ToPrimitive;
use std::f64::consts::PI;

use super::quad::gauss_legendre;
use super::series::Abscissa;
use super::{check_k, SeriesValue};
use crate::arith::zeta_product_constant;
use crate::error::{domain, Error, Result};

const EPS: f64 = f64::EPSILON;

/// Default cap on sawtooth terms and on quadrature panels.
pub const LK_TERM_CAP: u64 = 200_000_000;

/// ((y)) from the centred fraction f = y − round(y).
fn sawtooth(f: f64) -> f64 {
    if f > 0.0 {
        f - 0.5
    } else if f < 0.0 {
        f + 0.5
    } else {
        0.0
    }
}

/// L_k(x) with the tail bound π²/((k−1)R^{k−1}) from |((y))| ≤ 1/2.
pub fn eval_lk(x: impl Into<Abscissa>, k: u32, eps: f64) -> Result<SeriesValue<f64>> {
    check_k(k)?;
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    let x = x.into();
    let kf = k as f64;
    let r_max = ((PI * PI / ((kf - 1.0) * 0.5 * eps)).powf(1.0 / (kf - 1.0))).ceil() as u64;
    if r_max > LK_TERM_CAP {
        return Err(Error::Resource(format!("L_{k} needs {r_max} terms for eps {eps:e}")));
    }
    let mut s = 0.0;
    for r in (1..=r_max).rev() {
        s += sawtooth(x.centered_frac(r as u128)) * (r as f64).powi(-(k as i32));
    }
    let tail = PI * PI / ((kf - 1.0) * (r_max as f64).powf(kf - 1.0));
    let err = tail + 2.0 * PI * PI * (r_max as f64 + 4.0) * EPS * 1.7;
    Ok(SeriesValue::new(2.0 * PI * PI * s, err, r_max))
}

/// G_k(x) through the sawtooth integral. Each ∫₀ˣ((rt))dt is integrated by
/// Gauss–Legendre on the pieces between the jumps j/r, where ((rt)) is
/// linear and the two-point rule is exact. Terms beyond R are bounded by
/// |∫₀ˣ((rt))dt| ≤ 1/(8r), giving the tail π²/(4kR^k).
pub fn gk_via_integral(x: f64, k: u32, eps: f64) -> Result<SeriesValue<f64>> {
    check_k(k)?;
    if !(0.0..1.0).contains(&x) {
        return domain(format!("x = {x} must lie in [0, 1)"));
    }
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    let g0 = zeta_product_constant(k as i64)?;
    if x == 0.0 {
        return Ok(SeriesValue::new(g0, 16.0 * EPS * g0, 0));
    }
    let kf = k as f64;
    let r_max = ((PI * PI / (4.0 * kf * 0.5 * eps)).powf(1.0 / kf)).ceil() as u64;
    let panels = (r_max as f64).powi(2) * x / 2.0 + r_max as f64;
    if panels > LK_TERM_CAP as f64 {
        return Err(Error::Quadrature(format!(
            "{panels:.0} panels needed for eps {eps:e}, above the budget {LK_TERM_CAP}"
        )));
    }
    let (nodes, weights) = gauss_legendre(2);
    let mut total = 0.0;
    let mut abs = 0.0;
    for r in (1..=r_max).rev() {
        let rf = r as f64;
        // jumps of ((rt)) on (0, x) sit at j/r
        let last = (rf * x).floor().to_u64().unwrap();
        let mut integral = 0.0;
        let mut a = 0.0;
        for j in 1..=last + 1 {
            let b = if j <= last { j as f64 / rf } else { x };
            if b > a {
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                // inside (a, b) the sawtooth is rt − (j − 1) − 1/2
                let mut piece = 0.0;
                for (t, w) in nodes.iter().zip(&weights) {
                    let u = c + h * t;
                    piece += w * (rf * u - (j - 1) as f64 - 0.5);
                }
                integral += h * piece;
            }
            a = b;
        }
        let term = integral * rf.powi(-(k as i32));
        total += term;
        abs += term.abs();
    }
    let tail = PI * PI / (4.0 * kf * (r_max as f64).powf(kf));
    let value = g0 + 2.0 * PI * PI * total;
    let err = tail + 2.0 * PI * PI * abs * 1e-13 + 16.0 * EPS * g0.abs();
    Ok(SeriesValue::new(value, err, r_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{eval_series, Method};
    use num_rational::BigRational;

    #[test]
    fn sawtooth_convention() {
        assert_eq!(sawtooth(0.0), 0.0);
        assert_eq!(sawtooth(0.5), 0.0);
        assert!((sawtooth(0.2) + 0.3).abs() < 1e-16);
        assert!((sawtooth(-0.2) - 0.3).abs() < 1e-16);
    }

    #[test]
    fn lk_is_odd() {
        // exact fifths: the f64 values 0.2 and 0.8 are not reflections mod 1
        let a = eval_lk(&BigRational::new(1.into(), 5.into()), 2, 1e-5).unwrap();
        let b = eval_lk(&BigRational::new(4.into(), 5.into()), 2, 1e-5).unwrap();
        assert!((a.value + b.value).abs() < 1e-9);
        let z = eval_lk(0.0, 4, 1e-8).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn integral_route_matches_series() {
        assert_eq!(gk_via_integral(0.0, 2, 1e-8).unwrap().value, zeta_product_constant(2).unwrap());
        for &k in &[2u32, 4] {
            let gi = gk_via_integral(0.3, k, 1e-7).unwrap();
            let (_, g) = eval_series(0.3, k, 1e-12, Method::Hyperbola).unwrap();
            assert!((gi.value - g.value).abs() <= gi.error_bound + g.error_bound, "k={k}");
            assert!((gi.value - g.value).abs() < 1e-6);
        }
    }

    #[test]
    fn lk_is_the_derivative_of_gk() {
        // (G(x+h) − G(x−h))/2h against L at a point where L is continuous
        let x = 0.3 + 1e-3 * 2f64.sqrt();
        let h = 1e-5;
        let (_, gp) = eval_series(x + h, 4, 1e-13, Method::Hyperbola).unwrap();
        let (_, gm) = eval_series(x - h, 4, 1e-13, Method::Hyperbola).unwrap();
        let l = eval_lk(x, 4, 1e-9).unwrap();
        assert!(((gp.value - gm.value) / (2.0 * h) - l.value).abs() < 1e-3);
    }
}
