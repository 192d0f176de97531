//! Certified evaluation of the divisor-sum Fourier series
//!
//! F_k(x) = Σ σ_{k−1}(n) n^{−(k+1)} sin(2πnx), G_k(x) = the cosine analogue,
//! φ_k = G_k + iF_k on ℝ, their q-series continuation to the upper half
//! plane, the Eisenstein series E_k, and the sawtooth series L_k.
//!
//! Every value comes back as a [`SeriesValue`] carrying a bound on its
//! distance from the true value.

pub mod clausen;
pub mod lk;
pub mod moments;
pub mod qseries;
pub mod quad;
pub mod series;

pub use lk::{eval_lk, gk_via_integral};
pub use qseries::{eisenstein_best_effort, eval_eisenstein, eval_phi2_derivatives, eval_phi_derivative, phi_derivative_best_effort, PhiExpansion};
pub use series::{eval_phi, eval_series, eval_series_batch, eval_series_capped, Abscissa};

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A numeric value with a certified bound on |value − true value|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue<T> {
    pub value: T,
    pub error_bound: f64,
    pub terms_used: u64,
}

impl<T> SeriesValue<T> {
    pub fn new(value: T, error_bound: f64, terms_used: u64) -> Self {
        Self { value, error_bound, terms_used }
    }
}

impl SeriesValue<f64> {
    /// |a − b| ≤ combined bounds plus `slack`.
    pub fn agrees_with(&self, other: &SeriesValue<f64>, slack: f64) -> bool {
        (self.value - other.value).abs() <= self.error_bound + other.error_bound + slack
    }
}

/// A point of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return domain(format!("{re}+{im}i is not in the upper half plane"));
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Summation strategy for [`eval_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Direct Fourier sum with a sieve for σ.
    Naive,
    /// Divisor-swapped sum over Bernoulli and Clausen values.
    Hyperbola,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "hyperbola" => Ok(Method::Hyperbola),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Hyperbola => "hyperbola",
        })
    }
}

/// Smallest tolerance any evaluator accepts.
pub const EPS_FLOOR: f64 = 1e-13;

pub(crate) fn check_k(k: u32) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return domain(format!("k = {k} must be even and at least 2"));
    }
    Ok(())
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= EPS_FLOOR) {
        return domain(format!("eps = {eps:e} is below the floor {EPS_FLOOR:e}"));
    }
    Ok(())
}
