//! Integrals of φ_k against decaying rational weights on a half line.
//!
//! For w(v) = Σ_m a_m (v − s)^{−m} with m ≥ 2 and A > s,
//!
//!   ∫_A^∞ w(v) φ_k(v) dv = Σ_n c_n K_n,   K_n = ∫_A^∞ w(v) e(nv) dv,
//!
//! and each moment K_n is a combination of generalized exponential
//! integrals E_m at the purely imaginary argument −2πin(A − s). Termwise
//! integration is legitimate because Σ c_n converges absolutely, and
//! |K_n| ≤ (|w(A)| + TV(w))/(2πn) bounds the truncated tail.
//!
//! The oscillation of F_k(v) at large v never has to be resolved by a
//! quadrature rule this way.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_k, SeriesValue};
use crate::arith::build_divisor_table;
use crate::error::{domain, Error, Result};

const EPS: f64 = f64::EPSILON;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Moment count above which the request is refused.
pub const MOMENT_CAP: usize = 20_000_000;

/// w(v) = Σ coef · (v − shift)^{−power}, every power ≥ 2.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalWeight {
    pub shift: f64,
    pub terms: Vec<(u32, f64)>,
}

impl RationalWeight {
    pub fn new(shift: f64, terms: Vec<(u32, f64)>) -> Self {
        Self { shift, terms }
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.terms.iter().map(|&(m, a)| a * (v - self.shift).powi(-(m as i32))).sum()
    }

    /// The weight v ↦ w(−v).
    pub fn reflected(&self) -> Self {
        Self {
            shift: -self.shift,
            terms: self
                .terms
                .iter()
                .map(|&(m, a)| (m, if m % 2 == 0 { a } else { -a }))
                .collect(),
        }
    }

    /// |w(A)| + total variation of w on [A, ∞), bounded termwise.
    fn variation_bound(&self, a: f64) -> f64 {
        let l = a - self.shift;
        2.0 * self.terms.iter().map(|&(m, c)| c.abs() * l.powi(-(m as i32))).sum::<f64>()
    }
}

/// e^{z} E_m(z) for z = −iy, y > 0, and m ≥ 1, where
/// E_m(z) = ∫_1^∞ e^{−zt} t^{−m} dt.
pub fn scaled_expint(m: u32, y: f64) -> Complex64 {
    let z = Complex64::new(0.0, -y);
    if y >= 2.0 {
        // modified Lentz on the continued fraction
        let tiny = 1e-300;
        let mut b = z + m as f64;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i as f64) * (m as f64 - 1.0 + i as f64));
            b += 2.0;
            d = 1.0 / (d * an + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 2.0 * EPS {
                break;
            }
        }
        h
    } else {
        // power series around 0
        let mf = m as f64;
        let mut psi = -EULER_GAMMA;
        for j in 1..m {
            psi += 1.0 / j as f64;
        }
        let mz = -z;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0); // (−z)^k / k!
        let mut lead = Complex64::new(0.0, 0.0);
        for kk in 0..200u32 {
            if kk == m - 1 {
                lead = term * (-z.ln() + psi);
            } else {
                sum += term / (kk as f64 - mf + 1.0);
            }
            term = term * mz / (kk + 1) as f64;
            if kk > m && term.norm() < 1e-18 {
                break;
            }
        }
        (lead - sum) * z.exp()
    }
}

/// e(t) = e^{2πit} from the fractional part of t.
fn unit(t: f64) -> Complex64 {
    let f = t - t.round();
    let (s, c) = (2.0 * PI * f).sin_cos();
    Complex64::new(c, s)
}

/// ∫_A^∞ w(v) φ_k(v) dv.
pub fn phi_weighted_tail(
    k: u32,
    weight: &RationalWeight,
    a: f64,
    eps: f64,
) -> Result<SeriesValue<Complex64>> {
    phi_weighted_tail_capped(k, weight, a, eps, MOMENT_CAP)
}

/// [`phi_weighted_tail`] refusing requests that need more than `cap` moments.
pub fn phi_weighted_tail_capped(
    k: u32,
    weight: &RationalWeight,
    a: f64,
    eps: f64,
    cap: usize,
) -> Result<SeriesValue<Complex64>> {
    check_k(k)?;
    let l = a - weight.shift;
    if !(l > 0.0) || !l.is_finite() {
        return domain(format!("lower limit {a} must lie right of the pole {}", weight.shift));
    }
    if weight.terms.iter().any(|&(m, _)| m < 2) {
        return domain("weight powers must be at least 2");
    }
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    let var = weight.variation_bound(a);
    // Σ_{n>N} σ_{k−1}(n)/n^{k+2} ≤ (3 + 2 ln N)/(4N²)
    let tail_at = |n: f64| var / (2.0 * PI) * (3.0 + 2.0 * n.ln()) / (4.0 * n * n);
    let mut n_max = ((var * 10.0 / (4.0 * PI * eps)).sqrt().ceil() as usize).max(16);
    while tail_at(n_max as f64) > 0.5 * eps {
        n_max += n_max / 8 + 1;
    }
    while n_max > 16 && tail_at((n_max * 15 / 16) as f64) <= 0.5 * eps {
        n_max = n_max * 15 / 16;
    }
    if n_max > cap.min(MOMENT_CAP) {
        return Err(Error::Quadrature(format!(
            "{n_max} moments needed for eps {eps:e}, budget {}",
            cap.min(MOMENT_CAP)
        )));
    }
    let tail = tail_at(n_max as f64);
    let table = build_divisor_table(k - 1, n_max)?;

    let (mut s, mut comp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut round = 0.0;
    for n in 1..=n_max {
        let nf = n as f64;
        let y = 2.0 * PI * nf * l;
        let mut kn = Complex64::new(0.0, 0.0);
        for &(m, coef) in &weight.terms {
            kn += coef * l.powi(1 - m as i32) * scaled_expint(m, y);
        }
        kn *= unit(nf * a);
        let cn = table.get_f64(n) * nf.powi(-(k as i32 + 1));
        let t = cn * kn;
        // Kahan
        let yk = t - comp;
        let tt = s + yk;
        comp = (tt - s) - yk;
        s = tt;
        // CF/series tolerance plus the phase error of n·A in binary64
        round += t.norm() * (64.0 * EPS + 2.0 * PI * (nf * a).abs() * EPS);
    }
    let err = tail + round + 4.0 * EPS * s.norm();
    Ok(SeriesValue::new(s, err, n_max as u64))
}

/// ∫_{−∞}^B w(v) φ_k(v) dv, by reflection v → −v.
pub fn phi_weighted_head(
    k: u32,
    weight: &RationalWeight,
    b: f64,
    eps: f64,
) -> Result<SeriesValue<Complex64>> {
    phi_weighted_head_capped(k, weight, b, eps, MOMENT_CAP)
}

pub fn phi_weighted_head_capped(
    k: u32,
    weight: &RationalWeight,
    b: f64,
    eps: f64,
    cap: usize,
) -> Result<SeriesValue<Complex64>> {
    let r = phi_weighted_tail_capped(k, &weight.reflected(), -b, eps, cap)?;
    Ok(SeriesValue::new(r.value.conj(), r.error_bound, r.terms_used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::quad::{integrate, DEFAULT_BUDGET};

    fn direct_expint(m: u32, y: f64) -> Complex64 {
        // ∫_1^X e^{iyt} t^{−m} dt by quadrature, the rest by one integration by parts
        let x_end: f64 = 800.0;
        let mut breaks = vec![1.0];
        let mut t: f64 = 1.0;
        while t < x_end {
            t = (t + 0.25).min(x_end);
            breaks.push(t);
        }
        let f = |t: f64| Complex64::new(0.0, y * t).exp() * t.powi(-(m as i32));
        let body = integrate(f, &breaks, 1e-14, 10_000_000).unwrap().value;
        // three integrations by parts for ∫_X^∞ e^{iyt}t^{−m} dt
        let mf = m as f64;
        let iy = Complex64::new(0.0, y);
        let g0 = x_end.powi(-(m as i32));
        let g1 = -mf * x_end.powi(-(m as i32) - 1);
        let g2 = mf * (mf + 1.0) * x_end.powi(-(m as i32) - 2);
        let tail = -Complex64::new(0.0, y * x_end).exp() * (g0 / iy - g1 / (iy * iy) + g2 / (iy * iy * iy));
        let e = body + tail;
        e * Complex64::new(0.0, -y).exp()
    }

    #[test]
    fn expint_branches_match_quadrature() {
        for &m in &[2u32, 4, 5] {
            for &y in &[0.3, 1.0, 1.99, 2.01, 5.0, 40.0] {
                let got = scaled_expint(m, y);
                let want = direct_expint(m, y);
                assert!((got - want).norm() < 1e-10, "m={m} y={y}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for &m in &[2u32, 3, 5] {
            let a = scaled_expint(m, 2.0);
            let b = scaled_expint(m, 2.0 - 1e-12);
            assert!((a - b).norm() < 1e-11, "m={m} {a} {b}");
        }
    }

    #[test]
    fn reflection_conjugates() {
        let w = RationalWeight::new(0.25, vec![(4, 1.0), (5, -0.5)]);
        let r = w.reflected();
        for &v in &[1.0, 2.5, -3.0] {
            assert!((w.eval(-v) - r.eval(v)).abs() < 1e-15);
        }
    }

    #[test]
    fn first_moment_matches_quadrature() {
        let a: f64 = 1.5;
        let l = a;
        let k1 = l.powi(-3) * scaled_expint(4, 2.0 * PI * l) * unit(a);
        let f = |v: f64| Complex64::new(0.0, 2.0 * PI * v).exp() * v.powi(-4);
        let mut breaks = vec![a];
        while *breaks.last().unwrap() < 300.0 {
            breaks.push(breaks.last().unwrap() + 0.5);
        }
        let q = integrate(f, &breaks, 1e-14, DEFAULT_BUDGET * 10).unwrap().value;
        // tail beyond 300 is below 300^{−4}/(2π)
        assert!((k1 - q).norm() < 1e-10);
    }
}
