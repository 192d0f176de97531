//! Adaptive Gauss–Legendre quadrature for real and complex integrands.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default integrand-evaluation budget.
pub const DEFAULT_BUDGET: usize = 100_000;

/// Nodes and weights of the m-point rule on [−1, 1], by Newton iteration on
/// P_m from Chebyshev initial guesses.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { z } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (z * pm - pm1) / (z * z - 1.0);
            let dz = pm / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

pub(crate) fn rule20() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(20))
}

/// Values the adaptive integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T> {
    pub value: T,
    /// Sum of per-panel |coarse − refined| differences.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn gl<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> T {
    let (x, w) = rule20();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = T::zero();
    for (xi, wi) in x.iter().zip(w) {
        s = s + f(c + h * xi) * *wi;
    }
    s * h
}

/// Split a panel into halves, each with its own half-vs-quarter error estimate.
fn refine<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (Panel<T>, Panel<T>) {
    let m = 0.5 * (a + b);
    let l = gl(f, a, m);
    let r = gl(f, m, b);
    let (ll, lr) = (gl(f, a, 0.5 * (a + m)), gl(f, 0.5 * (a + m), m));
    let (rl, rr) = (gl(f, m, 0.5 * (m + b)), gl(f, 0.5 * (m + b), b));
    (
        Panel { a, b: m, value: l, err: (l - (ll + lr)).magnitude() },
        Panel { a: m, b, value: r, err: (r - (rl + rr)).magnitude() },
    )
}

/// Globally adaptive 20-point Gauss–Legendre on [a, b] over the given
/// breakpoints. Panels with the largest estimated error are bisected until
/// the summed estimate is below `tol` or the budget runs out (an error).
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    breakpoints: &[f64],
    tol: f64,
    budget: usize,
) -> Result<QuadResult<T>> {
    assert!(breakpoints.len() >= 2);
    let per_panel = 20;
    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    for win in breakpoints.windows(2) {
        let (a, b) = (win[0], win[1]);
        if b <= a {
            continue;
        }
        let v = gl(&mut f, a, b);
        let m = 0.5 * (a + b);
        let refined = gl(&mut f, a, m) + gl(&mut f, m, b);
        evals += 3 * per_panel;
        heap.push(Panel { a, b, value: refined, err: (v - refined).magnitude() });
    }
    loop {
        let total: f64 = heap.iter().map(|p| p.err).sum();
        if total <= tol {
            let mut value = T::zero();
            for p in heap.iter() {
                value = value + p.value;
            }
            return Ok(QuadResult { value, error_estimate: total, evaluations: evals });
        }
        if evals + 6 * per_panel > budget {
            return Err(Error::Quadrature(format!(
                "error estimate {total:.3e} above tolerance {tol:.3e} after {evals} evaluations"
            )));
        }
        let worst = heap.pop().unwrap();
        let (l, r) = refine(&mut f, worst.a, worst.b);
        evals += 6 * per_panel;
        heap.push(l);
        heap.push(r);
    }
}

/// ∫ along the straight segment from `from` to `to` in ℂ.
pub fn integrate_segment<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    from: Complex64,
    to: Complex64,
    tol: f64,
    budget: usize,
) -> Result<QuadResult<Complex64>> {
    let d = to - from;
    integrate(|s| f(from + d * s) * d, &[0.0, 1.0], tol, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(20);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..40 {
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((s - want).abs() < 1e-14, "deg {deg}");
        }
        let (x, w) = gauss_legendre(5);
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_sqrt_and_oscillation() {
        let r = integrate(|x: f64| x.sqrt(), &[0.0, 1.0], 1e-12, DEFAULT_BUDGET).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
        let r = integrate(|x: f64| (50.0 * x).sin(), &[0.0, 3.0], 1e-12, DEFAULT_BUDGET).unwrap();
        assert!((r.value - (1.0 - 150f64.cos()) / 50.0).abs() < 1e-11);
        // a kink at a supplied breakpoint costs nothing extra
        let r = integrate(|x: f64| (x - 0.3).abs(), &[0.0, 0.3, 1.0], 1e-14, DEFAULT_BUDGET).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(|x: f64| (1.0 / x).sin(), &[1e-9, 1.0], 1e-14, 2000);
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }

    #[test]
    fn complex_segment() {
        // ∫ z² dz from i to 1+2i
        let a = Complex64::new(0.0, 1.0);
        let b = Complex64::new(1.0, 2.0);
        let r = integrate_segment(|z| z * z, a, b, 1e-13, DEFAULT_BUDGET).unwrap();
        let want = (b * b * b - a * a * a) / 3.0;
        assert!((r.value - want).norm() < 1e-13);
    }
}
