//! Certified evaluation of the divisor-sum Fourier series
//!
//! ```text
//! φ_k(x) = G_k(x) + i F_k(x) = Σ σ_{k−1}(n) n^{−(k+1)} e(nx)
//! ```
//!
//! together with their Eisenstein-series functional equations, the exact
//! continued-fraction calculus of the Gauss map, and Brjuno-type
//! differentiability diagnostics.
//!
//! Module map:
//!
//! * [`arith`]: divisor sums, Bernoulli numbers, ζ constants.
//! * [`contfrac`]: exact Gauss orbits, convergents, basic intervals.
//! * [`analytic`]: series on ℝ and q-series on ℍ, Clausen, quadrature.
//! * [`funceq`]: f_γ, cusp polynomials, the real-line and general-k
//!   functional equations, the iterated evaluator and derivative series.
//! * [`brjuno`]: Brjuno sums, extreme numbers, difference-quotient scans.
//! * [`cli`]: run configuration, experiment drivers, CSV/JSON output.

pub mod analytic;
pub mod arith;
pub mod brjuno;
pub mod cli;
pub mod contfrac;
pub mod error;
pub mod funceq;

pub use error::{Error, Result};
