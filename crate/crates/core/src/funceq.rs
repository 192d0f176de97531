//! Functional equations of φ₂ and φ_k under SL₂(ℤ) and their consequences
//! on the real line: the constants f_γ, cusp polynomials, one-sided slopes
//! of G₂ at rationals, the Gauss-map iteration for F₂ and G₂, its
//! termwise derivative, and a residual checker for general even k.
//!
//! Conventions: γ = (a b; c d), s = cx + d, Log is the principal branch,
//! and for real s < 0, Log s = ln|s| + iπ.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::analytic::moments::{
    phi_weighted_head_capped, phi_weighted_tail, phi_weighted_tail_capped, RationalWeight,
};
use crate::analytic::quad::integrate_segment;
use crate::analytic::{
    check_eps, eisenstein_best_effort, eval_phi, eval_series, phi_derivative_best_effort, Abscissa, Method,
    PhiExpansion, SeriesValue, UpperHalfPoint,
};
use crate::arith::{bernoulli, zeta_product_constant};
use crate::contfrac::{ln_ratio, parse_real, rational_f64, GaussOrbit, RealSpec};
use crate::error::{domain, Error, Result};

const EPS: f64 = f64::EPSILON;

fn pi3() -> f64 {
    PI * PI * PI
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn phi2_der(z: UpperHalfPoint, order: u32, eps: f64) -> Result<SeriesValue<Complex64>> {
    phi_derivative_best_effort(z, 2, order, eps)
}

fn ln_c(z: Complex64) -> Complex64 {
    // keep +0 imaginary parts on the negative axis on the upper side
    Complex64::new(z.re, if z.im == 0.0 { 0.0 } else { z.im }).ln()
}

/// A residual |LHS − RHS| with the certificate it should stay below.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub residual: f64,
    pub certificate: f64,
}

impl Residual {
    pub fn holds(&self) -> bool {
        self.residual <= self.certificate
    }
}

// ---------------------------------------------------------------------------
// SL₂(ℤ)

/// Integer matrix (a b; c d) with ad − bc = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2Matrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl SL2Matrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if &a * &d - &b * &c != BigInt::one() {
            return domain(format!("({a} {b}; {c} {d}) has determinant ≠ 1"));
        }
        Ok(Self { a, b, c, d })
    }

    /// S = (0 −1; 1 0).
    pub fn s() -> Self {
        Self::new(0, -1, 1, 0).unwrap()
    }

    /// Complete a coprime bottom row (c, d) by Bézout.
    pub fn from_bottom_row(c: i64, d: i64) -> Result<Self> {
        if c == 0 {
            return domain("c must be non-zero");
        }
        let (cb, db) = (BigInt::from(c), BigInt::from(d));
        let e = db.extended_gcd(&cb);
        if !e.gcd.is_one() {
            return domain(format!("gcd({c}, {d}) = {} ≠ 1", e.gcd));
        }
        // x d + y c = 1, so a = x, b = −y
        Self::new(e.x, -e.y, cb, db)
    }

    /// (a + c, b + d; c, d), another lift with the same bottom row.
    pub fn shifted_lift(&self) -> Self {
        Self {
            a: &self.a + &self.c,
            b: &self.b + &self.d,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries_f64(&self) -> [f64; 4] {
        [&self.a, &self.b, &self.c, &self.d].map(|v| v.to_f64().unwrap())
    }

    /// γ·z = (az + b)/(cz + d).
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.entries_f64();
        (a * z + b) / (c * z + d)
    }

    pub fn apply_rational(&self, x: &BigRational) -> Result<BigRational> {
        let den = BigRational::from_integer(self.c.clone()) * x + BigRational::from_integer(self.d.clone());
        if den.is_zero() {
            return domain("γ·x is the cusp ∞");
        }
        Ok((BigRational::from_integer(self.a.clone()) * x + BigRational::from_integer(self.b.clone())) / den)
    }

    fn small_cd(&self) -> Result<(i64, i64)> {
        match (self.c.to_i64(), self.d.to_i64()) {
            (Some(c), Some(d)) if c != 0 => Ok((c, d)),
            _ => domain("need 0 < |c| and c, d within i64"),
        }
    }
}

// ---------------------------------------------------------------------------
// f_γ and the cusp polynomial

/// f_γ(z) = φ₂''(z) − φ₂''(γz) + iπ³/(3c(cz+d)) + 2π² Log(cz+d) + (iπ³/3) z.
pub fn f_gamma_at(gamma: &SL2Matrix, z: UpperHalfPoint, eps: f64) -> Result<SeriesValue<Complex64>> {
    let [_, _, c, d] = gamma.entries_f64();
    if c == 0.0 {
        return domain("f_γ needs c ≠ 0");
    }
    let zz = z.z();
    let gz = UpperHalfPoint::from_complex(gamma.apply(zz))?;
    let p1 = phi2_der(z, 2, 0.5 * eps)?;
    let p2 = phi2_der(gz, 2, 0.5 * eps)?;
    let s = c * zz + d;
    let p3 = pi3();
    let v = p1.value - p2.value + i() * p3 / (3.0 * c * s) + 2.0 * PI * PI * ln_c(s) + i() * p3 / 3.0 * zz;
    let round = 16.0 * EPS * (p1.value.norm() + p2.value.norm() + 2.0 * PI * PI * ln_c(s).norm() + p3 * zz.norm());
    Ok(SeriesValue::new(v, p1.error_bound + p2.error_bound + round, p1.terms_used + p2.terms_used))
}

/// f_γ, which depends only on (c, d), and the cusp value of g_γ.
#[derive(Clone, Debug, Serialize)]
pub struct GammaConstants {
    pub c: i64,
    pub d: i64,
    pub f_gamma: Complex64,
    pub f_error: f64,
    /// |f_γ(i) − f_γ(1/2 + i)|.
    pub probe_spread: f64,
    pub g_gamma_at_cusp: Complex64,
    pub g_error: f64,
}

/// P(x) = Ã s³ + B̃ s² + C̃ s + D̃ with s = cx + d.
#[derive(Clone, Debug, Serialize)]
pub struct CuspPolynomial {
    pub c: i64,
    pub d: i64,
    pub a_tilde: Complex64,
    pub b_tilde: Complex64,
    pub c_tilde: Complex64,
    pub d_tilde: Complex64,
    pub b_error: f64,
    pub c_error: f64,
    pub d_error: f64,
}

impl CuspPolynomial {
    /// Value at s = cx + d.
    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        ((self.a_tilde * s + self.b_tilde) * s + self.c_tilde) * s + self.d_tilde
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.eval_s(self.c as f64 * x + self.d as f64)
    }

    /// Error bound of [`Self::eval_s`] at |s|.
    pub fn error_at(&self, s_abs: f64) -> f64 {
        self.b_error * s_abs * s_abs + self.c_error * s_abs + self.d_error
    }

    /// Monomial coefficients [D, C, B, A] of P in x.
    pub fn monomial(&self) -> [Complex64; 4] {
        let (c, d) = (self.c as f64, self.d as f64);
        let (a3, b2, c1, d0) = (self.a_tilde, self.b_tilde, self.c_tilde, self.d_tilde);
        [
            a3 * d * d * d + b2 * d * d + c1 * d + d0,
            c * (3.0 * a3 * d * d + 2.0 * b2 * d + c1),
            c * c * (3.0 * a3 * d + b2),
            c * c * c * a3,
        ]
    }
}

fn check_cd(c: i64, d: i64) -> Result<()> {
    if c == 0 {
        return domain("c must be non-zero");
    }
    if c.gcd(&d) != 1 {
        return domain(format!("gcd({c}, {d}) ≠ 1"));
    }
    Ok(())
}

/// f_γ at probe z = i, cross-checked at 1/2 + i.
pub fn compute_f_gamma(c: i64, d: i64, eps: f64) -> Result<GammaConstants> {
    cusp_data(c, d, eps).map(|(g, _)| g)
}

/// All four coefficients of the cusp polynomial at −d/c.
///
/// Ã and B̃ follow from f_γ in closed form and D̃ = φ₂(−d/c). C̃ is read off
/// the upper-half-plane form of the same equation on the vertical ray
/// τ = −d/c + iε, where γτ = a/c + i/(c²ε) sits so high that the φ₂(γ·)
/// terms are below 1e−25.
pub fn cusp_polynomial(c: i64, d: i64, eps: f64) -> Result<CuspPolynomial> {
    cusp_data(c, d, eps).map(|(_, p)| p)
}

fn cusp_data(c: i64, d: i64, eps: f64) -> Result<(GammaConstants, CuspPolynomial)> {
    check_cd(c, d)?;
    check_eps(eps)?;
    let gamma = SL2Matrix::from_bottom_row(c, d)?;
    let f1 = f_gamma_at(&gamma, UpperHalfPoint::new(0.0, 1.0)?, 0.5 * eps)?;
    let f2 = f_gamma_at(&gamma, UpperHalfPoint::new(0.5, 1.0)?, 0.5 * eps)?;
    let spread = (f1.value - f2.value).norm();
    if spread > f1.error_bound + f2.error_bound + 1e-12 {
        return Err(Error::Certificate(format!(
            "f_γ probes disagree by {spread:.3e} for (c, d) = ({c}, {d})"
        )));
    }
    let f = f1.value;
    let f_err = f1.error_bound;

    let (cf, df) = (c as f64, d as f64);
    let p3 = pi3();
    let a_t = -i() * p3 / (18.0 * cf.powi(3));
    let b_t = f / (2.0 * cf * cf) + 3.0 * PI * PI / (2.0 * cf * cf) + i() * p3 * df / (6.0 * cf.powi(3));
    let b_err = f_err / (2.0 * cf * cf);

    let cusp = BigRational::new(BigInt::from(-d), BigInt::from(c));
    let d_val = eval_phi(Abscissa::from_rational(&cusp), 2, eps.max(1e-13))?;

    let ray = 0.1 / (cf * cf);
    let tau = UpperHalfPoint::new(-df / cf, ray)?;
    let u = Complex64::new(0.0, cf * ray);
    let ph = phi2_der(tau, 0, (0.25 * eps * u.norm()).max(1e-15))?;
    let lu = ln_c(u);
    let neglected = 2.0 * (-20.0 * PI).exp() * (u.norm().powi(4) + 12.0 * cf.powi(4) * ray.powi(4));
    let num = ph.value - d_val.value - a_t * u * u * u - b_t * u * u
        + i() * p3 / (3.0 * cf.powi(3)) * u * lu
        + PI * PI / (cf * cf) * u * u * lu;
    let c_t = num / u;
    let c_err = (ph.error_bound + d_val.error_bound + b_err * u.norm_sqr() + neglected + 16.0 * EPS * num.norm())
        / u.norm();

    let poly = CuspPolynomial {
        c,
        d,
        a_tilde: a_t,
        b_tilde: b_t,
        c_tilde: c_t,
        d_tilde: d_val.value,
        b_error: b_err,
        c_error: c_err,
        d_error: d_val.error_bound,
    };
    // the linear monomial coefficient C equals g_γ(−d/c) + π²d/c + iπ³/(3c²)
    let big_c = poly.monomial()[1];
    let g = big_c - PI * PI * df / cf - i() * p3 / (3.0 * cf * cf);
    let g_err = cf.abs() * (c_err + 2.0 * df.abs() * b_err) + 16.0 * EPS * big_c.norm();
    let consts = GammaConstants {
        c,
        d,
        f_gamma: f,
        f_error: f_err,
        probe_spread: spread,
        g_gamma_at_cusp: g,
        g_error: g_err,
    };
    Ok((consts, poly))
}

// ---------------------------------------------------------------------------
// local expansion at a rational

/// One-sided behaviour of G₂ and F₂ at p/q.
#[derive(Clone, Debug, Serialize)]
pub struct LocalExpansion {
    pub p: i64,
    pub q: i64,
    pub g2_right_slope: f64,
    pub g2_left_slope: f64,
    /// Left slope minus right slope, π⁴/(3q²).
    pub jump: f64,
    /// F₂(p/q + h) − F₂(p/q) ≈ F2_log_coefficient · h log(1/h).
    pub f2_log_coefficient: f64,
    pub slope_error: f64,
}

pub fn local_expansion(p: i64, q: i64, eps: f64) -> Result<LocalExpansion> {
    if q < 1 {
        return domain("q must be at least 1");
    }
    if p.gcd(&q) != 1 {
        return domain(format!("{p}/{q} is not reduced"));
    }
    let poly = cusp_polynomial(q, -p, eps)?;
    let qf = q as f64;
    let right = qf * poly.c_tilde.re;
    let jump = PI.powi(4) / (3.0 * qf * qf);
    Ok(LocalExpansion {
        p,
        q,
        g2_right_slope: right,
        g2_left_slope: right + jump,
        jump,
        f2_log_coefficient: pi3() / (3.0 * qf * qf),
        slope_error: qf * poly.c_error,
    })
}

// ---------------------------------------------------------------------------
// real-line equation for φ₂

/// Both sides of
///   φ₂(x) = s⁴φ₂(γx) − (iπ³/3c³) s Log s + P(x) − (π²/c²) s² Log s
///           + 6 ∫_{−d/c}^x c(ct+d)²(c(x−t) − (ct+d)) φ₂(γt) dt.
///
/// Substituting v = γt turns the integral into ∫ w(v)φ₂(v)dv over a half
/// line ending at γx with w(v) = (s/c³)(v − a/c)^{−4} + (2/c⁴)(v − a/c)^{−5}.
/// `quad_budget` caps the number of Fourier moments that integral may use.
pub fn phi2_transform_check(x: f64, gamma: &SL2Matrix, eps: f64, quad_budget: usize) -> Result<Residual> {
    let (c, d) = gamma.small_cd()?;
    check_eps(eps)?;
    if !x.is_finite() {
        return domain("x must be finite");
    }
    let (cf, df) = (c as f64, d as f64);
    let [af, _, _, _] = gamma.entries_f64();
    if (x + df / cf).abs() < 1e-9 {
        return domain(format!("x = {x} is within 1e-9 of the cusp −d/c"));
    }
    let xr = BigRational::from_float(x).unwrap();
    let s = cf * x + df;
    let gx = gamma.apply_rational(&xr)?;
    let gx_f = rational_f64(&gx);

    let share = eps / 8.0;
    let poly = cusp_polynomial(c, d, share.max(1e-13))?;
    let lhs = eval_phi(x, 2, share.max(1e-13))?;
    let s4 = s.powi(4);
    let pg = eval_phi(Abscissa::from_rational(&gx), 2, (share / s4.max(1.0)).max(1e-13))?;

    let weight = RationalWeight::new(af / cf, vec![(4, s / cf.powi(3)), (5, 2.0 / cf.powi(4))]);
    let integral = if s / cf > 0.0 {
        phi_weighted_head_capped(2, &weight, gx_f, share / 6.0, quad_budget)?
    } else {
        let t = phi_weighted_tail_capped(2, &weight, gx_f, share / 6.0, quad_budget)?;
        SeriesValue::new(-t.value, t.error_bound, t.terms_used)
    };

    let sc = Complex64::new(s, 0.0);
    let ls = ln_c(sc);
    let p3 = pi3();
    let terms = [
        s4 * pg.value,
        -i() * p3 / (3.0 * cf.powi(3)) * sc * ls,
        poly.eval_s(sc),
        -PI * PI / (cf * cf) * sc * sc * ls,
        6.0 * integral.value,
    ];
    let rhs: Complex64 = terms.iter().sum();
    let round = 32.0 * EPS * (terms.iter().map(|t| t.norm()).sum::<f64>() + lhs.value.norm());
    let cert = lhs.error_bound
        + s4 * pg.error_bound
        + poly.error_at(s.abs())
        + 6.0 * integral.error_bound
        + round;
    Ok(Residual { residual: (lhs.value - rhs).norm(), certificate: cert })
}

// ---------------------------------------------------------------------------
// E₂ and φ₂'' transformation checks

/// |E₂(z) − E₂(γz)/(cz+d)² + (6/iπ) c/(cz+d)|.
pub fn e2_transform_residual(z: UpperHalfPoint, gamma: &SL2Matrix, eps: f64) -> Result<Residual> {
    let [_, _, c, d] = gamma.entries_f64();
    let gz = UpperHalfPoint::from_complex(gamma.apply(z.z()))?;
    let s = c * z.z() + d;
    let e = eisenstein_best_effort(z, 2, 0.5 * eps)?;
    let eg = eisenstein_best_effort(gz, 2, 0.5 * eps * s.norm_sqr().max(1.0))?;
    let rhs = eg.value / (s * s) - 6.0 / (i() * PI) * c / s;
    let cert = e.error_bound + eg.error_bound / s.norm_sqr() + 16.0 * EPS * (e.value.norm() + rhs.norm() + 2.0 * c.abs() / s.norm());
    Ok(Residual { residual: (e.value - rhs).norm(), certificate: cert })
}

/// The transformation of φ₂'' between two points τ, α ∈ ℍ:
///   φ₂''(τ) = φ₂''(γτ) − φ₂''(γα) − iπ³/(3c(cτ+d)) + iπ³/(3c(cα+d))
///             − 2π² Log(cτ+d) + 2π² Log(cα+d) + φ₂''(α) − (iπ³/3)(τ − α).
pub fn phi2_second_derivative_residual(
    tau: UpperHalfPoint,
    alpha: UpperHalfPoint,
    gamma: &SL2Matrix,
    eps: f64,
) -> Result<Residual> {
    let [_, _, c, d] = gamma.entries_f64();
    if c == 0.0 {
        return domain("need c ≠ 0");
    }
    let e = eps / 5.0;
    let (t, a) = (tau.z(), alpha.z());
    let ev = |z: Complex64| -> Result<SeriesValue<Complex64>> {
        phi2_der(UpperHalfPoint::from_complex(z)?, 2, e)
    };
    let (lt, gt, ga, la) = (ev(t)?, ev(gamma.apply(t))?, ev(gamma.apply(a))?, ev(a)?);
    let (st, sa) = (c * t + d, c * a + d);
    let p3 = pi3();
    let rhs = gt.value - ga.value - i() * p3 / (3.0 * c * st) + i() * p3 / (3.0 * c * sa)
        - 2.0 * PI * PI * ln_c(st)
        + 2.0 * PI * PI * ln_c(sa)
        + la.value
        - i() * p3 / 3.0 * (t - a);
    let cert = lt.error_bound + gt.error_bound + ga.error_bound + la.error_bound
        + 64.0 * EPS * (rhs.norm() + lt.value.norm() + p3 * (t.norm() + a.norm()) + 40.0);
    Ok(Residual { residual: (lt.value - rhs).norm(), certificate: cert })
}

// ---------------------------------------------------------------------------
// Gauss-map iteration for F₂ and G₂

/// The polynomials of the one-step identities
///   F₂(x) = −x⁴F₂(Tx) − (π³/3) x log x + P(x) − 6 Im 𝓘(x),
///   G₂(x) =  x⁴G₂(Tx) − π² x² log x + Q(x) + 6 Re 𝓘(x),
/// with 𝓘(y) = ∫₀^y t²(y − 2t) φ₂(1/t) dt. They are the imaginary and real
/// parts of the cusp polynomial at 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OneStepPolynomials {
    /// Coefficients of P in increasing degree.
    pub p: [f64; 4],
    pub q: [f64; 4],
    /// Error bound on each of the linear coefficients.
    pub linear_error: f64,
}

impl OneStepPolynomials {
    pub fn p_at(&self, y: f64) -> f64 {
        horner(&self.p, y)
    }
    pub fn q_at(&self, y: f64) -> f64 {
        horner(&self.q, y)
    }
    pub fn p_prime(&self, y: f64) -> f64 {
        self.p[1] + y * (2.0 * self.p[2] + 3.0 * y * self.p[3])
    }
    pub fn q_prime(&self, y: f64) -> f64 {
        self.q[1] + y * (2.0 * self.q[2] + 3.0 * y * self.q[3])
    }
}

fn horner(c: &[f64; 4], y: f64) -> f64 {
    ((c[3] * y + c[2]) * y + c[1]) * y + c[0]
}

pub fn one_step_polynomials() -> Result<OneStepPolynomials> {
    static CACHE: OnceLock<Result<OneStepPolynomials>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let poly = cusp_polynomial(1, 0, 1e-12)?;
            let m = poly.monomial();
            let zz = zeta_product_constant(2)?;
            Ok(OneStepPolynomials {
                p: [0.0, m[1].im, m[2].im, m[3].im],
                q: [zz, m[1].re, m[2].re, m[3].re],
                linear_error: poly.c_error,
            })
        })
        .clone()
}

/// 𝓘(y) = ∫₀^y t²(y − 2t) φ₂(1/t) dt = ∫_{1/y}^∞ (y v^{−4} − 2v^{−5}) φ₂(v) dv.
pub fn one_step_integral(y: f64, eps: f64) -> Result<SeriesValue<Complex64>> {
    if !(y > 0.0 && y <= 1.0) {
        return domain(format!("y = {y} outside (0, 1]"));
    }
    let w = RationalWeight::new(0.0, vec![(4, y), (5, -2.0)]);
    phi_weighted_tail(2, &w, 1.0 / y, eps)
}

/// J(y) = ∫₀^y t² φ₂(1/t) dt = ∫_{1/y}^∞ v^{−4} φ₂(v) dv, so that
/// 𝓘'(y) = J(y) − y³ φ₂(1/y).
pub fn cubic_moment_integral(y: f64, eps: f64) -> Result<SeriesValue<Complex64>> {
    if !(y > 0.0 && y <= 1.0) {
        return domain(format!("y = {y} outside (0, 1]"));
    }
    let w = RationalWeight::new(0.0, vec![(4, 1.0)]);
    phi_weighted_tail(2, &w, 1.0 / y, eps)
}

/// |𝓘(y)| ≤ (3/16) ζ(2)ζ(3) y⁴ and |J(y)| ≤ ζ(2)ζ(3) y³/3, since |φ₂| ≤ ζ(2)ζ(3).
fn integral_bound(y: f64) -> f64 {
    3.0 / 16.0 * zz() * y.powi(4)
}

fn zz() -> f64 {
    zeta_product_constant(2).unwrap() * (1.0 + 1e-14)
}

/// Per-depth record of the iteration.
#[derive(Clone, Debug, Serialize)]
pub struct DepthTerm {
    pub k: usize,
    pub t_k: f64,
    pub beta_prev: f64,
    pub beta_k: f64,
    pub gamma_k: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    /// 𝓘(T^k x); imaginary part feeds F₂, real part G₂.
    pub integral_re: f64,
    pub integral_im: f64,
    pub integral_error: f64,
    /// True when the integral was replaced by its a-priori bound.
    pub integral_bounded_only: bool,
    pub a_k: f64,
    pub b_k: f64,
    pub c_k: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationTerms {
    pub depth_used: usize,
    /// True when T^{n+1}x = 0 ended the iteration exactly.
    pub terminated: bool,
    pub terms: Vec<DepthTerm>,
    pub f_remainder_bound: f64,
    pub g_remainder_bound: f64,
}

/// F₂ and G₂ from the iterated one-step identities
///   F₂(x) = Σ_k [(π³/3)u₁ₖ + u₂ₖ + 6u₃ₖ] + (−1)^{n+1} β_n⁴ F₂(T^{n+1}x),
///   G₂(x) = Σ_k [π² v₁ₖ + v₂ₖ + 6v₃ₖ] + β_n⁴ G₂(T^{n+1}x),
/// stopping when T^{n+1}x = 0 or when β_n⁴ ζ(2)ζ(3) is below a quarter of eps.
pub fn eval_f2g2_cf(
    x: &RealSpec,
    eps: f64,
    max_depth: usize,
) -> Result<(SeriesValue<f64>, SeriesValue<f64>, IterationTerms)> {
    check_eps(eps)?;
    let num = parse_real(x)?;
    let v = num.value();
    if !v.is_positive() || v >= &BigRational::one() {
        return domain("x must lie in (0, 1)");
    }
    let orbit = num.orbit(max_depth)?;
    iterate_orbit(&orbit, eps)
}

fn iterate_orbit(
    orbit: &GaussOrbit,
    eps: f64,
) -> Result<(SeriesValue<f64>, SeriesValue<f64>, IterationTerms)> {
    let poly = one_step_polynomials()?;
    let zz = zz();
    let p3 = pi3();
    let (mut f, mut g) = (0.0, 0.0);
    let (mut f_err, mut g_err) = (0.0, 0.0);
    let mut mag = 0.0;
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let tk = orbit.t(k);
        let b_prev = orbit.beta_f64(k as i64 - 1);
        let w = b_prev.powi(4);
        if tk.is_zero() {
            // exact remainder: F₂(0) = 0, G₂(0) = ζ(2)ζ(3)
            g += w * zz;
            g_err += w * zz * 1e-14;
            let it = IterationTerms {
                depth_used: k.saturating_sub(1),
                terminated: true,
                terms,
                f_remainder_bound: 0.0,
                g_remainder_bound: 0.0,
            };
            return Ok(finish(f, g, f_err, g_err, mag, it));
        }
        let y = orbit.t_f64(k);
        let b_k = orbit.beta_f64(k as i64);
        let gamma_k = orbit.gamma(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let ln_inv = ln_ratio(tk.denom(), tk.numer());

        let share = eps * 0.5f64.powi(k as i32 + 2);
        let (int_v, int_e, bounded) = if 6.0 * w * integral_bound(y) <= share {
            (Complex64::new(0.0, 0.0), integral_bound(y), true)
        } else {
            let r = one_step_integral(y, (share / (6.0 * w)).max(1e-16))?;
            (r.value, r.error_bound, false)
        };
        let u1 = sign * b_prev * b_prev * b_k * gamma_k;
        let u2 = sign * poly.p_at(y) * w;
        let u3 = -sign * w * int_v.im;
        let v1 = b_prev * b_k * b_k * gamma_k;
        let v2 = poly.q_at(y) * w;
        let v3 = w * int_v.re;
        let df = p3 / 3.0 * u1 + u2 + 6.0 * u3;
        let dg = PI * PI * v1 + v2 + 6.0 * v3;
        f += df;
        g += dg;
        f_err += 6.0 * w * int_e + w * y * poly.linear_error;
        g_err += 6.0 * w * int_e + w * y * poly.linear_error;
        mag += (p3 / 3.0 * u1).abs() + u2.abs() + (6.0 * u3).abs() + (PI * PI * v1).abs() + v2.abs();
        // γ carries the log error of a ratio of big integers
        f_err += 8.0 * EPS * (p3 / 3.0 * u1).abs() * (1.0 + ln_inv.abs());
        g_err += 8.0 * EPS * (PI * PI * v1).abs() * (1.0 + ln_inv.abs());

        let (qm, qk) = (orbit.q_f64(k as i64 - 1), orbit.q_f64(k as i64));
        terms.push(DepthTerm {
            k,
            t_k: y,
            beta_prev: b_prev,
            beta_k: b_k,
            gamma_k,
            u1,
            u2,
            u3,
            v1,
            v2,
            v3,
            integral_re: int_v.re,
            integral_im: int_v.im,
            integral_error: int_e,
            integral_bounded_only: bounded,
            a_k: -3.0 * b_prev * b_prev * qm * qk + 6.0 * b_prev * b_k * qm + 3.0 * sign * b_prev * b_prev * b_k * qm * qm,
            b_k: sign * (3.0 * b_prev * qm * qm * qk - 3.0 * b_k * qm * qm - b_k * qm.powi(3))
                - 3.0 * b_prev * b_k * qm.powi(3),
            c_k: -qm.powi(3) * qk,
        });

        let rem = b_k.powi(4) * zz;
        let next_zero = k < orbit.depth() && orbit.t(k + 1).is_zero();
        if rem <= 0.25 * eps && !next_zero {
            let it = IterationTerms {
                depth_used: k,
                terminated: false,
                terms,
                f_remainder_bound: rem,
                g_remainder_bound: rem,
            };
            return Ok(finish(f, g, f_err + rem, g_err + rem, mag, it));
        }
        if k == orbit.depth() {
            return Err(Error::Depth(format!(
                "remainder β_{k}⁴ζ(2)ζ(3) = {rem:.3e} still above eps/4 at the end of the orbit"
            )));
        }
        k += 1;
    }
}

fn finish(
    f: f64,
    g: f64,
    f_err: f64,
    g_err: f64,
    mag: f64,
    it: IterationTerms,
) -> (SeriesValue<f64>, SeriesValue<f64>, IterationTerms) {
    let n = it.terms.len() as u64;
    let round = 8.0 * EPS * (mag + f.abs() + g.abs());
    (
        SeriesValue::new(f, f_err + round, n),
        SeriesValue::new(g, g_err + round, n),
        it,
    )
}

/// Residuals of the one-step identities at a single x ∈ (0, 1), with
/// F₂(Tx), G₂(Tx) evaluated directly.
pub fn one_step_residuals(x: &BigRational, eps: f64) -> Result<(Residual, Residual)> {
    check_eps(eps)?;
    if !x.is_positive() || x >= &BigRational::one() {
        return domain("x must lie in (0, 1)");
    }
    let poly = one_step_polynomials()?;
    let y = rational_f64(x);
    let tx = crate::contfrac::frac(&x.recip());
    let (f0, g0) = eval_series(Abscissa::from_rational(x), 2, eps, Method::Hyperbola)?;
    let (f1, g1) = eval_series(Abscissa::from_rational(&tx), 2, eps, Method::Hyperbola)?;
    let int = one_step_integral(y, eps / 6.0)?;
    let y4 = y.powi(4);
    let lg = y.ln();
    let f_rhs = -y4 * f1.value - pi3() / 3.0 * y * lg + poly.p_at(y) - 6.0 * int.value.im;
    let g_rhs = y4 * g1.value - PI * PI * y * y * lg + poly.q_at(y) + 6.0 * int.value.re;
    let common = 6.0 * int.error_bound + y * poly.linear_error + 32.0 * EPS * 50.0;
    Ok((
        Residual {
            residual: (f0.value - f_rhs).abs(),
            certificate: f0.error_bound + y4 * f1.error_bound + common,
        },
        Residual {
            residual: (g0.value - g_rhs).abs(),
            certificate: g0.error_bound + y4 * g1.error_bound + common,
        },
    ))
}

// ---------------------------------------------------------------------------
// termwise derivative

/// Partial sums of the termwise derivative series at a quotient-backed x.
#[derive(Clone, Debug, Serialize)]
pub struct DerivativeSeries {
    /// Final partial sum; the error bound is the numerical error plus
    /// twice the size of the last term as a tail estimate.
    pub value: SeriesValue<f64>,
    pub partial_sums: Vec<f64>,
    /// Partial sums of the log terms alone: (π³/3) Σ β_{k−1}γ_k for F₂,
    /// π² Σ (−1)^k β_{k−1}γ_k T^k for G₂.
    pub log_term_sums: Vec<f64>,
    pub numeric_error: f64,
    pub tail_estimate: f64,
    /// Log-term sums above 10³ with the last three increments positive and
    /// growing. A witness of divergence, not a proof.
    pub divergent: bool,
}

/// Threshold for the divergence witness.
pub const DIVERGENCE_THRESHOLD: f64 = 1e3;

/// F₂'(x) and G₂'(x) from differentiating the iteration term by term.
///
/// With R(y) = −(π³/3) y log y + P(y) − 6 Im 𝓘(y), term k of F₂' is
///   −4β_{k−1}³ q_{k−1} R(T^k x) + β_{k−1}² R'(T^k x),
/// where R'(y) = −(π³/3)(log y + 1) + P'(y) + 6y³F₂(1/y) − 6 Im J(y).
/// G₂' is analogous with alternating signs.
pub fn derivative_series(x: &RealSpec, depth: usize, eps: f64) -> Result<(DerivativeSeries, DerivativeSeries)> {
    check_eps(eps)?;
    let num = parse_real(x)?;
    let orbit = num.orbit(depth + 1)?;
    if orbit.depth() < depth + 1 {
        return Err(Error::Depth(format!(
            "orbit has depth {} but the series to depth {depth} needs {}",
            orbit.depth(),
            depth + 1
        )));
    }
    let poly = one_step_polynomials()?;
    let p3 = pi3();
    let zz = zz();
    let mut f = Partial::default();
    let mut g = Partial::default();
    for k in 0..=depth {
        let tk = orbit.t(k);
        if tk.is_zero() || orbit.t(k + 1).is_zero() {
            return domain(format!("T^{}x = 0: x is rational at this depth", k + 1));
        }
        let y = orbit.t_f64(k);
        let ln_y = -ln_ratio(tk.denom(), tk.numer());
        let bp = orbit.beta_f64(k as i64 - 1);
        let qm = orbit.q_f64(k as i64 - 1);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w_r = 4.0 * bp.powi(3) * qm;
        let w_d = bp * bp;
        let share = eps * 0.5f64.powi(k as i32 + 3);

        let wi = 6.0 * w_r;
        let (int_v, int_e) = if wi * integral_bound(y) <= share {
            (Complex64::new(0.0, 0.0), integral_bound(y))
        } else {
            let r = one_step_integral(y, (share / wi).max(1e-16))?;
            (r.value, r.error_bound)
        };
        let j_bound = zz * y.powi(3) / 3.0;
        let (j_v, j_e) = if 6.0 * w_d * j_bound <= share {
            (Complex64::new(0.0, 0.0), j_bound)
        } else {
            let r = cubic_moment_integral(y, (share / (6.0 * w_d)).max(1e-16))?;
            (r.value, r.error_bound)
        };
        let (f1, g1) = eval_series(
            Abscissa::from_rational(orbit.t(k + 1)),
            2,
            (share / (6.0 * w_d * y.powi(3)).max(1e-300)).clamp(1e-13, 1e-4),
            Method::Hyperbola,
        )?;

        let r_f = -p3 / 3.0 * y * ln_y + poly.p_at(y) - 6.0 * int_v.im;
        let rp_f = -p3 / 3.0 * (ln_y + 1.0) + poly.p_prime(y) + 6.0 * y.powi(3) * f1.value - 6.0 * j_v.im;
        let log_f = -p3 / 3.0 * ln_y * w_d;
        let tf = -w_r * r_f + w_d * rp_f;

        let r_g = -PI * PI * y * y * ln_y + poly.q_at(y) + 6.0 * int_v.re;
        let rp_g = -PI * PI * (2.0 * y * ln_y + y) + poly.q_prime(y) - 6.0 * y.powi(3) * g1.value + 6.0 * j_v.re;
        let log_g = sign * -2.0 * PI * PI * y * ln_y * w_d;
        let tg = sign * (-w_r * r_g + w_d * rp_g);

        let lin = poly.linear_error;
        let err_f = w_r * (6.0 * int_e + y * lin) + w_d * (lin + 6.0 * y.powi(3) * f1.error_bound + 6.0 * j_e);
        let err_g = w_r * (6.0 * int_e + y * lin) + w_d * (lin + 6.0 * y.powi(3) * g1.error_bound + 6.0 * j_e);
        f.push(tf, log_f, err_f);
        g.push(tg, log_g, err_g);
    }
    Ok((f.finish(), g.finish()))
}

#[derive(Default)]
struct Partial {
    sum: f64,
    log_sum: f64,
    err: f64,
    mag: f64,
    last: f64,
    sums: Vec<f64>,
    log_sums: Vec<f64>,
}

impl Partial {
    fn push(&mut self, t: f64, log_t: f64, err: f64) {
        self.sum += t;
        self.log_sum += log_t;
        self.err += err;
        self.mag += t.abs();
        self.last = t;
        self.sums.push(self.sum);
        self.log_sums.push(self.log_sum);
    }

    fn finish(self) -> DerivativeSeries {
        let n = self.log_sums.len();
        let divergent = n >= 4 && self.log_sum > DIVERGENCE_THRESHOLD && {
            let inc: Vec<f64> = (n - 3..n).map(|j| self.log_sums[j] - self.log_sums[j - 1]).collect();
            inc[0] > 0.0 && inc[1] > inc[0] && inc[2] > inc[1]
        };
        let numeric = self.err + 16.0 * EPS * self.mag;
        let tail = 2.0 * self.last.abs();
        DerivativeSeries {
            value: SeriesValue::new(self.sum, numeric + tail, n as u64),
            partial_sums: self.sums,
            log_term_sums: self.log_sums,
            numeric_error: numeric,
            tail_estimate: tail,
            divergent,
        }
    }
}

// ---------------------------------------------------------------------------
// general even k

/// C_k = −2k·k!/((2πi)^{k+1} B_k).
pub fn c_k_constant(k: u32) -> Result<Complex64> {
    let bk = bernoulli(k as i64)?.to_f64().unwrap();
    let fact: f64 = (1..=k).map(|j| j as f64).product();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    Ok(-2.0 * k as f64 * fact / (two_pi_i.powu(k + 1) * bk))
}

fn binom(n: u32, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

/// Residual of the weight-k equation between τ and α in ℍ:
///   φ_k(τ) = τ^{k+2} φ_k(−1/τ) − (k/C_k) τ Log τ + P_{k,α}(τ)
///            + ∫_α^τ Q(t, τ) φ_k(−1/t) dt,
/// integrated along the segment from α to τ, with
///   Q(t, τ) = −(k+2)(k+1) t^{k+1} + (k+1)k τ t^k,
///   P_{k,α} = (p + q)/C_k + r/k!, where
///   p = −(τ−α)^{k+1}/(k+1) + C_k Σ_{m≤k} (τ−α)^{k−m} φ_k^{(k−m)}(α)/(k−m)!,
///   q = Σ_{m≤k−2} (−1)^m C(k,m)/(m−k+1) (τ − τ^{k−m} α^{m−k+1}) + kτ Log α + τ − α,
///   r = Σ_{i<k} (−1)^{i+1} g^{(i)}(u) φ_k^{(k−i)}(u) − g^{(k)}(u) φ_k(u),
/// u = −1/α and g(u) = Σ_j C(k,j) τ^j u^{j−2}.
pub fn verify_funceq_k(
    k: u32,
    tau: UpperHalfPoint,
    alpha: UpperHalfPoint,
    eps: f64,
    quad_budget: usize,
) -> Result<Residual> {
    if k < 4 || k % 2 != 0 {
        return domain(format!("k = {k}: need even k ≥ 4 (k = 2 has its own check)"));
    }
    if tau.im() < 0.05 || alpha.im() < 0.05 {
        return domain("τ and α need im ≥ 0.05");
    }
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    let (t, a) = (tau.z(), alpha.z());
    // the segment stays in the disc of radius max(|α|, |τ|), so −1/t has
    // imaginary part at least min im / max |·|²
    let rmax = t.norm_sqr().max(a.norm_sqr());
    let min_im = (tau.im().min(alpha.im()) / rmax).min(alpha.im()).min(tau.im()).min(1.0);
    let inner = (eps * 1e-3).max(1e-15);
    let ex = PhiExpansion::new(k, k, 0.999 * min_im, inner)?;

    let ck = c_k_constant(k)?;
    let kf = k as f64;
    let kfact = factorial(k);
    let mut err = 0.0;
    let mut mag = 0.0;

    // p / C_k
    let dta = t - a;
    let mut p_over = -dta.powu(k + 1) / ((kf + 1.0) * ck);
    for m in 0..=k {
        let j = k - m;
        let phi = ex.eval(a, j)?;
        let coef = dta.powu(j) / factorial(j);
        p_over += coef * phi.value;
        err += coef.norm() * phi.error_bound;
        mag += (coef * phi.value).norm();
    }

    // q / C_k
    let mut q = t - a + kf * t * ln_c(a);
    for m in 0..=(k - 2) {
        let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
        let e = m as i32 - k as i32 + 1;
        q += sgn * binom(k, m) / e as f64 * (t - t.powi((k - m) as i32) * a.powi(e));
    }
    mag += q.norm() / ck.norm();

    // r / k!
    let u = -1.0 / a;
    let g_der = |order: u32| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            let e = j as i32 - 2;
            let mut c = binom(k, j) * 1.0;
            for r in 0..order as i32 {
                c *= (e - r) as f64;
            }
            if c != 0.0 {
                s += c * t.powu(j) * u.powi(e - order as i32);
            }
        }
        s
    };
    let mut r = Complex64::new(0.0, 0.0);
    for ii in 0..k {
        let sgn = if ii % 2 == 0 { -1.0 } else { 1.0 };
        let gd = g_der(ii);
        let phi = ex.eval(u, k - ii)?;
        r += sgn * gd * phi.value;
        err += gd.norm() * phi.error_bound / kfact;
        mag += (gd * phi.value).norm() / kfact;
    }
    let gk = g_der(k);
    let phi_u = ex.eval(u, 0)?;
    r -= gk * phi_u.value;
    err += gk.norm() * phi_u.error_bound / kfact;
    mag += (gk * phi_u.value).norm() / kfact;

    let poly = p_over + q / ck + r / kfact;

    // the integral term
    let integral = if dta.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let qf = |s: Complex64| -(kf + 2.0) * (kf + 1.0) * s.powu(k + 1) + (kf + 1.0) * kf * t * s.powu(k);
        let mut phi_err: f64 = 0.0;
        let mut qmax: f64 = 0.0;
        let res = integrate_segment(
            |s| {
                let z = -1.0 / s;
                match ex.eval(z, 0) {
                    Ok(v) => {
                        phi_err = phi_err.max(v.error_bound);
                        let qs = qf(s);
                        qmax = qmax.max(qs.norm());
                        qs * v.value
                    }
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                }
            },
            a,
            t,
            0.25 * eps,
            quad_budget,
        )?;
        if !res.value.re.is_finite() {
            return Err(Error::Quadrature("integrand left the prepared half plane".into()));
        }
        err += res.error_estimate + qmax * phi_err * dta.norm();
        mag += res.value.norm();
        res.value
    };

    let lhs = ex.eval(t, 0)?;
    let phi_t = ex.eval(-1.0 / t, 0)?;
    let tk2 = t.powu(k + 2);
    let rhs = tk2 * phi_t.value - kf / ck * t * ln_c(t) + poly + integral;
    err += lhs.error_bound + tk2.norm() * phi_t.error_bound;
    mag += (tk2 * phi_t.value).norm() + (kf / ck * t * ln_c(t)).norm() + lhs.value.norm();
    Ok(Residual {
        residual: (lhs.value - rhs).norm(),
        certificate: err + 256.0 * EPS * mag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zeta;

    fn pt(re: f64, im: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(re, im).unwrap()
    }

    #[test]
    fn bezout_lift_and_alternate() {
        for &(c, d) in &[(1, 0), (2, 1), (3, 1), (5, -3), (-4, 7)] {
            let g = SL2Matrix::from_bottom_row(c, d).unwrap();
            assert_eq!(g.c(), &BigInt::from(c));
            assert_eq!(g.d(), &BigInt::from(d));
            let h = g.shifted_lift();
            assert_eq!(h.a() * h.d() - h.b() * h.c(), BigInt::one());
        }
        assert!(SL2Matrix::from_bottom_row(2, 4).is_err());
        assert!(SL2Matrix::from_bottom_row(0, 1).is_err());
        assert!(SL2Matrix::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn f_gamma_for_inversion_is_i_pi_cubed() {
        let g = compute_f_gamma(1, 0, 1e-11).unwrap();
        assert!((g.f_gamma - i() * pi3()).norm() < 1e-10, "{}", g.f_gamma);
    }

    #[test]
    fn f_gamma_known_values_and_independence() {
        let p3 = pi3();
        for &(c, d, want) in &[(2, 1, 5.0 / 6.0), (3, 1, 10.0 / 9.0)] {
            let g = compute_f_gamma(c, d, 1e-11).unwrap();
            assert!((g.f_gamma - i() * p3 * want).norm() < 1e-9, "({c},{d}) {}", g.f_gamma);
        }
        // second probe and second lift
        let gam = SL2Matrix::from_bottom_row(2, 1).unwrap();
        let a = f_gamma_at(&gam, pt(0.0, 1.0), 1e-12).unwrap();
        let b = f_gamma_at(&gam, pt(0.0, 2.0), 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 2e-12 + a.error_bound + b.error_bound);
        let gam = SL2Matrix::from_bottom_row(3, 1).unwrap();
        let a = f_gamma_at(&gam, pt(0.0, 1.0), 1e-12).unwrap();
        let b = f_gamma_at(&gam.shifted_lift(), pt(0.0, 1.0), 1e-12).unwrap();
        assert!((a.value - b.value).norm() < a.error_bound + b.error_bound + 1e-12);
    }

    #[test]
    fn cusp_polynomial_at_zero() {
        let p = cusp_polynomial(1, 0, 1e-12).unwrap();
        let p3 = pi3();
        assert!((p.a_tilde + i() * p3 / 18.0).norm() < 1e-15);
        assert!((p.b_tilde - (i() * p3 / 2.0 + 1.5 * PI * PI)).norm() < 1e-10);
        // C̃ = −π⁴/6 + 2πi[ζ(2)(1 − log 2π) + ζ'(2)], ζ'(2) = −0.93754825431584…
        let zeta2 = PI * PI / 6.0;
        let want = Complex64::new(
            -PI.powi(4) / 6.0,
            2.0 * PI * (zeta2 * (1.0 - (2.0 * PI).ln()) - 0.937_548_254_315_843_8),
        );
        assert!((p.c_tilde - want).norm() < 1e-9, "{}", p.c_tilde);
        let zz = PI * PI / 6.0 * zeta(3).unwrap().0;
        assert!((p.d_tilde - zz).norm() < 1e-11);
        // Ã only depends on c
        let (a, b) = (cusp_polynomial(2, 1, 1e-10).unwrap(), cusp_polynomial(2, -1, 1e-10).unwrap());
        assert_eq!(a.a_tilde, b.a_tilde);
        assert!((a.a_tilde + i() * p3 / 144.0).norm() < 1e-16);
    }

    #[test]
    fn local_expansion_at_zero() {
        let e = local_expansion(0, 1, 1e-12).unwrap();
        assert!((e.g2_right_slope + PI.powi(4) / 6.0).abs() < 1e-9);
        assert!((e.g2_left_slope - PI.powi(4) / 6.0).abs() < 1e-9);
        let e = local_expansion(2, 5, 1e-11).unwrap();
        assert!((e.jump - PI.powi(4) / 75.0).abs() < 1e-13);
        assert!((e.f2_log_coefficient - pi3() / 75.0).abs() < 1e-14);
        assert!(local_expansion(2, 4, 1e-10).is_err());
        assert!(local_expansion(1, 0, 1e-10).is_err());
    }

    #[test]
    fn slopes_at_one_half_match_difference_quotients() {
        let e = local_expansion(1, 2, 1e-12).unwrap();
        let g = |x: f64| eval_series(x, 2, 1e-13, Method::Hyperbola).unwrap().1.value;
        let g0 = g(0.5);
        // Richardson on h and h/2 removes the h log h and h terms' leading error
        let dq = |h: f64| (g(0.5 + h) - g0) / h;
        let (h1, h2) = (1e-4, 5e-5);
        let right = 2.0 * dq(h2) - dq(h1);
        let left = 2.0 * dq(-h2) - dq(-h1);
        assert!((right - e.g2_right_slope).abs() < 0.01 * e.g2_right_slope.abs().max(1.0), "{right} {}", e.g2_right_slope);
        assert!((left - e.g2_left_slope).abs() < 0.01 * e.g2_left_slope.abs().max(1.0), "{left} {}", e.g2_left_slope);
    }

    #[test]
    fn real_line_equation_residuals() {
        let r = phi2_transform_check(0.3, &SL2Matrix::s(), 1e-9, 10_000_000).unwrap();
        assert!(r.residual < 1e-7 && r.holds(), "{r:?}");
        let g = SL2Matrix::from_bottom_row(2, 1).unwrap();
        let r = phi2_transform_check(0.51, &g, 1e-9, 10_000_000).unwrap();
        assert!(r.residual < 1e-7 && r.holds(), "{r:?}");
        let r = phi2_transform_check(-0.7, &g, 1e-9, 10_000_000).unwrap();
        assert!(r.residual < 1e-7 && r.holds(), "{r:?}");
        assert!(phi2_transform_check(-0.5 + 1e-10, &g, 1e-9, 10_000_000).is_err());
        assert!(matches!(
            phi2_transform_check(0.3, &SL2Matrix::s(), 1e-9, 10),
            Err(Error::Quadrature(_))
        ));
    }

    #[test]
    fn e2_and_second_derivative_transforms() {
        let g = SL2Matrix::from_bottom_row(3, 2).unwrap();
        let r = e2_transform_residual(pt(-0.6, 0.5), &g, 1e-12).unwrap();
        assert!(r.residual < 1e-10 && r.holds(), "{r:?}");
        let r = phi2_second_derivative_residual(pt(0.2, 0.8), pt(-0.1, 1.3), &g, 1e-12).unwrap();
        assert!(r.residual < 1e-9 && r.holds(), "{r:?}");
    }

    #[test]
    fn iteration_matches_direct_series() {
        let spec: RealSpec = "rational:2/5".parse().unwrap();
        let (f, g, terms) = eval_f2g2_cf(&spec, 1e-10, 50).unwrap();
        assert!(terms.terminated);
        let (fs, gs) = eval_series(0.4, 2, 1e-12, Method::Hyperbola).unwrap();
        assert!((f.value - fs.value).abs() < 1e-8 && f.agrees_with(&fs, 0.0), "{} {}", f.value, fs.value);
        assert!((g.value - gs.value).abs() < 1e-8 && g.agrees_with(&gs, 0.0), "{} {}", g.value, gs.value);
        for t in &terms.terms {
            assert!(t.integral_im.abs() <= zz() && t.integral_re.abs() <= zz());
        }
    }

    #[test]
    fn iteration_on_a_quotient_list() {
        let spec: RealSpec = format!("cf:[{}]", vec!["1"; 60].join(",")).parse().unwrap();
        let x = parse_real(&spec).unwrap();
        let (f, g, terms) = eval_f2g2_cf(&spec, 1e-10, 60).unwrap();
        assert!(!terms.terminated);
        let (fs, gs) = eval_series(Abscissa::from_rational(x.value()), 2, 1e-12, Method::Hyperbola).unwrap();
        assert!((f.value - fs.value).abs() < 1e-8 && f.agrees_with(&fs, 0.0));
        assert!((g.value - gs.value).abs() < 1e-8 && g.agrees_with(&gs, 0.0));
        // u₁ recomputed from the orbit
        let orbit = x.orbit(10).unwrap();
        let t3 = &terms.terms[3];
        let want = -orbit.beta_f64(2).powi(2) * orbit.beta_f64(3) * orbit.gamma(3);
        assert!((t3.u1 - want).abs() < 1e-15 * want.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn one_step_identity_at_037() {
        let x = BigRational::new(37.into(), 100.into());
        let (rf, rg) = one_step_residuals(&x, 1e-12).unwrap();
        assert!(rf.holds() && rf.residual < 1e-9, "{rf:?}");
        assert!(rg.holds() && rg.residual < 1e-9, "{rg:?}");
    }

    #[test]
    fn derivative_at_golden_matches_difference_quotient() {
        let spec: RealSpec = format!("cf:[{}]", vec!["1"; 60].join(",")).parse().unwrap();
        let (fp, gp) = derivative_series(&spec, 40, 1e-10).unwrap();
        assert!(!fp.divergent);
        let x = parse_real(&spec).unwrap().to_f64();
        let h = 1e-6;
        let ev = |y: f64| eval_series(y, 2, 1e-13, Method::Hyperbola).unwrap();
        let (fu, gu) = ev(x + h);
        let (fd, gd) = ev(x - h);
        let dqf = (fu.value - fd.value) / (2.0 * h);
        let dqg = (gu.value - gd.value) / (2.0 * h);
        assert!((fp.value.value - dqf).abs() < 1e-2, "{} vs {dqf}", fp.value.value);
        assert!((gp.value.value - dqg).abs() < 1e-2, "{} vs {dqg}", gp.value.value);
    }

    #[test]
    fn general_k_equation() {
        for k in [4, 6] {
            let r = verify_funceq_k(k, pt(0.3, 1.0), pt(0.0, 1.0), 1e-10, 200_000).unwrap();
            assert!(r.residual < 1e-6 && r.holds(), "k={k} {r:?}");
            let r = verify_funceq_k(k, pt(-0.2, 1.5), pt(0.0, 2.0), 1e-10, 200_000).unwrap();
            assert!(r.residual < 1e-6 && r.holds(), "k={k} {r:?}");
            let r = verify_funceq_k(k, pt(0.3, 1.0), pt(0.3, 1.0), 1e-10, 200_000).unwrap();
            assert!(r.residual < 1e-8, "k={k} {r:?}");
        }
        assert!(verify_funceq_k(2, pt(0.3, 1.0), pt(0.0, 1.0), 1e-10, 1000).is_err());
        assert!(verify_funceq_k(5, pt(0.3, 1.0), pt(0.0, 1.0), 1e-10, 1000).is_err());
    }
}
