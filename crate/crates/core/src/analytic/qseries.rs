//! q-expansions on the upper half plane: E_k and derivatives of φ_k.
//!
//! With q = e^{2πiz},
//!   E_k(z) = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ,
//!   φ_k^{(j)}(z) = Σ σ_{k−1}(n) n^{−(k+1)} (2πin)^j qⁿ.
//! Tails use σ_{k−1}(n) ≤ n^k.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

use super::{check_k, SeriesValue, UpperHalfPoint};
use crate::arith::{bernoulli, build_divisor_table};
use crate::error::{domain, Error, Result};

/// Smallest imaginary part [`eval_eisenstein`] accepts.
pub const MIN_IM: f64 = 0.05;

/// Term cap for the φ derivative sums, which accept any im(z) > 0.
pub const PHI_TERM_CAP: usize = 20_000_000;

const EPS: f64 = f64::EPSILON;

/// Smallest N with amp · Σ_{n>N} n^a rⁿ ≤ target, using
/// Σ_{n>N} n^a rⁿ ≤ (N+1)^a r^{N+1}/(1 − ρ), ρ = r·max(1, ((N+2)/(N+1))^a).
fn truncation(amp: f64, a: f64, r: f64, target: f64) -> (usize, f64) {
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let rho = r * ((nf + 2.0) / (nf + 1.0)).powf(a).max(1.0);
        if rho < 1.0 {
            let bound = amp * (nf + 1.0).powf(a) * r.powf(nf + 1.0) / (1.0 - rho);
            if bound <= target {
                return (n, bound);
            }
        }
        n += 1;
    }
}

fn check_point(z: &UpperHalfPoint) -> Result<()> {
    if z.im() < MIN_IM {
        return Err(Error::Certificate(format!(
            "im(z) = {} is below {MIN_IM}; the q-series certificate needs |q| bounded away from 1",
            z.im()
        )));
    }
    Ok(())
}

/// Σ_{n≤N} coeff(n) qⁿ with qⁿ evaluated directly, plus a rounding bound.
fn q_sum(z: Complex64, n_max: usize, coeff: impl Fn(usize) -> Complex64) -> (Complex64, f64) {
    let mut s = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for n in (1..=n_max).rev() {
        let qn = (Complex64::new(0.0, 2.0 * PI * n as f64) * z).exp();
        let t = coeff(n) * qn;
        s += t;
        abs += t.norm();
    }
    (s, (n_max as f64 + 8.0) * 2.0 * EPS * abs)
}

/// E_k(z) for even k ≥ 2 (quasi-modular when k = 2).
pub fn eval_eisenstein(z: UpperHalfPoint, k: u32, eps: f64) -> Result<SeriesValue<Complex64>> {
    let v = eisenstein_best_effort(z, k, eps)?;
    if v.error_bound > eps {
        return Err(Error::Certificate(format!(
            "E_{k} bound {:.3e} exceeds eps {eps:.3e}",
            v.error_bound
        )));
    }
    Ok(v)
}

/// As [`eval_eisenstein`], reporting the reachable bound instead of refusing.
pub fn eisenstein_best_effort(z: UpperHalfPoint, k: u32, eps: f64) -> Result<SeriesValue<Complex64>> {
    check_k(k)?;
    check_point(&z)?;
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    let bk = bernoulli(k as i64)?.to_f64().unwrap();
    let c = -2.0 * k as f64 / bk;
    let r = (-2.0 * PI * z.im()).exp();
    let (n_max, tail) = truncation(c.abs(), k as f64, r, 0.5 * eps);
    let table = build_divisor_table(k - 1, n_max)?;
    let (s, round) = q_sum(z.z(), n_max, |n| Complex64::new(table.get_f64(n), 0.0));
    let err = tail + c.abs() * round + 2.0 * EPS * (1.0 + (c * s).norm());
    Ok(SeriesValue::new(Complex64::new(1.0, 0.0) + c * s, err, n_max as u64))
}

/// φ_k^{(order)}(z) for even k ≥ 2 and any order.
pub fn eval_phi_derivative(
    z: UpperHalfPoint,
    k: u32,
    order: u32,
    eps: f64,
) -> Result<SeriesValue<Complex64>> {
    let v = phi_derivative_best_effort(z, k, order, eps)?;
    if v.error_bound > eps {
        return Err(Error::Certificate(format!(
            "φ_{k}^({order}) bound {:.3e} exceeds eps {eps:.3e}",
            v.error_bound
        )));
    }
    Ok(v)
}

/// As [`eval_phi_derivative`], truncating at eps/2 but returning whatever
/// bound the rounding allows instead of refusing.
pub fn phi_derivative_best_effort(
    z: UpperHalfPoint,
    k: u32,
    order: u32,
    eps: f64,
) -> Result<SeriesValue<Complex64>> {
    check_k(k)?;
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    let r = (-2.0 * PI * z.im()).exp();
    let amp = (2.0 * PI).powi(order as i32);
    // rough size of N before committing to the scan
    let guess = ((1.0 / eps).ln() + order as f64 * 10.0) / (2.0 * PI * z.im());
    if guess > PHI_TERM_CAP as f64 {
        return Err(Error::Resource(format!("im(z) = {} needs about {guess:.0} terms", z.im())));
    }
    let (n_max, tail) = truncation(amp, order as f64 - 1.0, r, 0.5 * eps);
    let table = build_divisor_table(k - 1, n_max)?;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let (s, round) = q_sum(z.z(), n_max, |n| {
        let nf = n as f64;
        table.get_f64(n) * nf.powi(-(k as i32 + 1)) * (i2pi * nf).powi(order as i32)
    });
    Ok(SeriesValue::new(s, tail + round, n_max as u64))
}

/// φ₂^{(order)}(z), order 0..=3.
pub fn eval_phi2_derivatives(z: UpperHalfPoint, order: u32, eps: f64) -> Result<SeriesValue<Complex64>> {
    if order > 3 {
        return domain(format!("derivative order {order} outside 0..=3"));
    }
    eval_phi_derivative(z, 2, order, eps)
}

/// φ_k and its derivatives up to a fixed order, with the divisor table
/// built once for every point with im(z) ≥ `min_im`.
#[derive(Clone, Debug)]
pub struct PhiExpansion {
    k: u32,
    max_order: u32,
    min_im: f64,
    coeffs: Vec<f64>,
    tail: f64,
}

impl PhiExpansion {
    pub fn new(k: u32, max_order: u32, min_im: f64, eps: f64) -> Result<Self> {
        check_k(k)?;
        if !(min_im > 0.0) || !(eps > 0.0) {
            return domain("PhiExpansion needs min_im > 0 and eps > 0");
        }
        let guess = ((1.0 / eps).ln() + max_order as f64 * 10.0) / (2.0 * PI * min_im);
        if guess > PHI_TERM_CAP as f64 {
            return Err(Error::Resource(format!("im ≥ {min_im} needs about {guess:.0} terms")));
        }
        // (2π)^j n^{j−1} ≤ (2π)^J n^{J−1} for j ≤ J, so one cut serves all orders
        let r = (-2.0 * PI * min_im).exp();
        let amp = (2.0 * PI).powi(max_order as i32);
        let (n_max, tail) = truncation(amp, max_order as f64 - 1.0, r, 0.5 * eps);
        let table = build_divisor_table(k - 1, n_max)?;
        let coeffs = (1..=n_max)
            .map(|n| table.get_f64(n) * (n as f64).powi(-(k as i32 + 1)))
            .collect();
        Ok(Self { k, max_order, min_im, coeffs, tail })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eval(&self, z: Complex64, order: u32) -> Result<SeriesValue<Complex64>> {
        if order > self.max_order {
            return domain(format!("order {order} above the prepared {}", self.max_order));
        }
        if !(z.im >= self.min_im) {
            return domain(format!("im(z) = {} below the prepared {}", z.im, self.min_im));
        }
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        let (s, round) = q_sum(z, self.coeffs.len(), |n| {
            self.coeffs[n - 1] * (i2pi * n as f64).powi(order as i32)
        });
        Ok(SeriesValue::new(s, self.tail + round, self.coeffs.len() as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::series::eval_series;
    use crate::analytic::Method;

    fn pt(re: f64, im: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(re, im).unwrap()
    }

    #[test]
    fn eisenstein_fixed_point_values() {
        let e2 = eval_eisenstein(pt(0.0, 1.0), 2, 1e-13).unwrap();
        assert!((e2.value - Complex64::new(3.0 / PI, 0.0)).norm() < 1e-13);
        let e6 = eval_eisenstein(pt(0.0, 1.0), 6, 1e-12).unwrap();
        assert!(e6.value.norm() < 1e-11);
        // E₄(ρ) = 0 at ρ = e^{2πi/3}
        let e4 = eval_eisenstein(pt(-0.5, 3f64.sqrt() / 2.0), 4, 1e-12).unwrap();
        assert!(e4.value.norm() < 1e-10);
        let a = eval_eisenstein(pt(0.3, 1.0), 4, 1e-12).unwrap();
        let b = eval_eisenstein(pt(1.3, 1.0), 4, 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
    }

    #[test]
    fn third_derivative_is_shifted_e2() {
        for z in [pt(0.0, 1.0), pt(0.2, 0.7)] {
            let d3 = eval_phi2_derivatives(z, 3, 1e-12).unwrap();
            let e2 = eval_eisenstein(z, 2, 1e-12).unwrap();
            let rhs = Complex64::new(0.0, PI.powi(3) / 3.0) * (e2.value - 1.0);
            let bound = d3.error_bound + PI.powi(3) / 3.0 * e2.error_bound;
            assert!((d3.value - rhs).norm() <= bound + 1e-13);
        }
    }

    #[test]
    fn decay_and_boundary_continuity() {
        let v = eval_phi2_derivatives(pt(0.0, 10.0), 0, 1e-30).unwrap();
        assert!(v.value.norm() < 1e-25);
        let near = eval_phi2_derivatives(pt(0.3, 1e-3), 0, 1e-10).unwrap();
        let (f, g) = eval_series(0.3, 2, 1e-12, Method::Hyperbola).unwrap();
        let want = Complex64::new(g.value, f.value);
        assert!((near.value - want).norm() < 0.05);
        assert!(matches!(eval_eisenstein(pt(0.3, 1e-3), 2, 1e-10), Err(Error::Certificate(_))));
        assert!(matches!(eval_phi2_derivatives(pt(0.3, 1e-9), 0, 1e-10), Err(Error::Resource(_))));
        assert!(eval_phi2_derivatives(pt(0.3, 1.0), 4, 1e-10).is_err());
    }

    #[test]
    fn prepared_expansion_matches_direct_sums() {
        let ex = PhiExpansion::new(6, 6, 0.4, 1e-13).unwrap();
        for (z, j) in [(pt(0.1, 0.4), 0), (pt(-0.3, 0.9), 3), (pt(0.45, 2.0), 6)] {
            let a = ex.eval(z.z(), j).unwrap();
            let b = eval_phi_derivative(z, 6, j, 1e-13).unwrap();
            assert!((a.value - b.value).norm() <= a.error_bound + b.error_bound);
        }
        assert!(ex.eval(Complex64::new(0.0, 0.3), 0).is_err());
        assert!(ex.eval(Complex64::new(0.0, 1.0), 7).is_err());
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let z = pt(0.1, 0.6);
        let h = 1e-5;
        for order in 0..3 {
            let up = eval_phi_derivative(pt(0.1 + h, 0.6), 4, order, 1e-12).unwrap().value;
            let dn = eval_phi_derivative(pt(0.1 - h, 0.6), 4, order, 1e-12).unwrap().value;
            let d = eval_phi_derivative(z, 4, order + 1, 1e-12).unwrap().value;
            assert!(((up - dn) / (2.0 * h) - d).norm() < 1e-6 * (1.0 + d.norm()));
        }
    }
}
