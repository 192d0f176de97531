//! F_k and G_k on the real line.
//!
//! Two independent evaluators. The naive one sums c_n e(nx) with
//! c_n = σ_{k−1}(n)/n^{k+1} straight from a segmented sieve. The hyperbola
//! one writes n = de and sums the inner d-series in closed form:
//!
//!   G_k(x) = π² Σ_e B₂({ex})/e^{k+1},   F_k(x) = Σ_e Cl₂(2π{ex})/e^{k+1}.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;

use super::clausen::{b2_frac, cl2_frac, CL2_MAX};
use super::{check_eps, check_k, Method, SeriesValue};
use crate::arith::{zeta, SegmentedSigma};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Default cap on the number of terms the naive sum may use.
pub const NAIVE_TERM_CAP: u64 = 3_000_000_000;

/// Largest denominator whose residues are kept exactly in `u128`.
const EXACT_BITS: u64 = 126;
/// Up to this denominator the naive sum buckets terms by residue class.
const CLASS_LIMIT: u128 = 1 << 20;
const SIEVE_BLOCK: usize = 1 << 16;
/// Phase recurrence length between exact resyncs.
const RESYNC: usize = 64;

/// A real abscissa reduced mod 1, held so that {nx} is available exactly.
///
/// Rationals with denominators below 2^126 keep exact residues. Larger
/// denominators (deep continued-fraction surrogates) fall back to a 128-bit
/// fixed-point fraction, off by at most 2^−128.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Abscissa {
    Exact { p: u128, q: u128 },
    Fixed(u128),
}

impl Abscissa {
    pub fn from_rational(x: &BigRational) -> Self {
        let num = x.numer().mod_floor(x.denom());
        let den = x.denom().clone();
        if den.bits() <= EXACT_BITS {
            let g = num.gcd(&den);
            let (p, q) = if g.is_zero() {
                (BigInt::zero(), BigInt::one())
            } else {
                (&num / &g, &den / &g)
            };
            Abscissa::Exact { p: p.to_u128().unwrap(), q: q.to_u128().unwrap() }
        } else {
            let scaled: BigInt = (num << 128u32) / den;
            Abscissa::Fixed(scaled.to_u128().unwrap())
        }
    }

    /// Exact dyadic conversion of a finite float.
    pub fn from_f64(x: f64) -> Self {
        let r = BigRational::from_float(x).expect("finite abscissa");
        Self::from_rational(&r)
    }

    pub fn to_f64(&self) -> f64 {
        self.centered_frac(1).rem_euclid(1.0)
    }

    /// Error of the stored fraction against the true abscissa.
    pub fn representation_error(&self) -> f64 {
        match self {
            Abscissa::Exact { .. } => 0.0,
            Abscissa::Fixed(_) => 2f64.powi(-128),
        }
    }

    /// {n x} shifted into (−1/2, 1/2].
    pub fn centered_frac(&self, n: u128) -> f64 {
        match *self {
            Abscissa::Exact { p, q } => centered(mulmod(n % q, p, q), q),
            Abscissa::Fixed(x) => fixed_centered(x.wrapping_mul(n)),
        }
    }

    fn residues(&self) -> Residues {
        match *self {
            Abscissa::Exact { p, q } => Residues::Exact { p, q, r: 0 },
            Abscissa::Fixed(x) => Residues::Fixed { x, r: 0 },
        }
    }
}

impl From<f64> for Abscissa {
    fn from(x: f64) -> Self {
        Abscissa::from_f64(x)
    }
}

impl From<&BigRational> for Abscissa {
    fn from(x: &BigRational) -> Self {
        Abscissa::from_rational(x)
    }
}

/// r/q in (−1/2, 1/2] with small relative error.
fn centered(r: u128, q: u128) -> f64 {
    if 2 * r > q {
        -((q - r) as f64 / q as f64)
    } else {
        r as f64 / q as f64
    }
}

fn fixed_centered(r: u128) -> f64 {
    let scale = 2f64.powi(-128);
    if r > 1u128 << 127 {
        -((r.wrapping_neg()) as f64 * scale)
    } else {
        r as f64 * scale
    }
}

/// a·b mod q for a, b < q < 2^127.
fn mulmod(mut a: u128, mut b: u128, q: u128) -> u128 {
    let mut acc = 0u128;
    b %= q;
    while a > 0 {
        if a & 1 == 1 {
            acc += b;
            if acc >= q {
                acc -= q;
            }
        }
        b += b;
        if b >= q {
            b -= q;
        }
        a >>= 1;
    }
    acc
}

/// Running residues of e·x, e = 1, 2, ….
enum Residues {
    Exact { p: u128, q: u128, r: u128 },
    Fixed { x: u128, r: u128 },
}

impl Residues {
    fn next_centered(&mut self) -> f64 {
        match self {
            Residues::Exact { p, q, r } => {
                *r += *p;
                if *r >= *q {
                    *r -= *q;
                }
                centered(*r, *q)
            }
            Residues::Fixed { x, r } => {
                *r = r.wrapping_add(*x);
                fixed_centered(*r)
            }
        }
    }
}

/// Compensated summation.
#[derive(Clone, Copy, Default)]
struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
}

// ---------------------------------------------------------------------------
// hyperbola

fn hyperbola(x: &Abscissa, k: u32, eps: f64) -> Result<(SeriesValue<f64>, SeriesValue<f64>)> {
    let kf = k as f64;
    // tails: G ≤ π²·(1/6)/(k E^k), F ≤ CL2_MAX/(k E^k); half of eps for each
    let g_amp = PI * PI / 6.0;
    let e_max = ((g_amp.max(CL2_MAX) / (kf * 0.5 * eps)).powf(1.0 / kf)).ceil().max(1.0) as u64;
    let tail = |amp: f64| amp / (kf * (e_max as f64).powf(kf));

    let mut res = x.residues();
    let (mut fs, mut gs) = (Kahan::default(), Kahan::default());
    let (mut f_round, mut g_round) = (0.0, 0.0);
    let mut wsum = 0.0;
    for e in 1..=e_max {
        let f = res.next_centered();
        let w = (1.0 / e as f64).powi(k as i32 + 1);
        let b2 = b2_frac(f) * w;
        let theta = (2.0 * PI * f).abs();
        let c2 = cl2_frac(f) * w;
        gs.add(b2);
        fs.add(c2);
        wsum += w;
        g_round += 4.0 * EPS * b2.abs();
        let log_part = if theta > 0.0 { 1.0 + theta * (2.0 + theta.ln().abs()) } else { 1.0 };
        f_round += 8.0 * EPS * w * log_part;
    }
    g_round += 6e-16 * wsum;
    // a fixed-point abscissa moves each ex by ≤ e·2^−128; Cl₂ and B₂ are
    // Hölder there, and the sum over e is far below one ulp
    let repr = if x.representation_error() > 0.0 { 1e-30 } else { 0.0 };
    let g_val = PI * PI * gs.s;
    let g_err = tail(g_amp) + PI * PI * g_round + 4.0 * EPS * g_val.abs() + repr;
    let f_err = tail(CL2_MAX) + f_round + 2.0 * EPS * fs.s.abs() + repr;
    if g_err > eps || f_err > eps {
        return Err(Error::Certificate(format!(
            "hyperbola bound {:.3e} exceeds eps {eps:.3e}",
            g_err.max(f_err)
        )));
    }
    Ok((
        SeriesValue::new(fs.s, f_err, e_max),
        SeriesValue::new(g_val, g_err, e_max),
    ))
}

// ---------------------------------------------------------------------------
// naive

enum Phase {
    /// Terms bucketed by n mod q, then one length-q exponential sum.
    Classes { p: u128, q: u128, r: usize, acc: Vec<Kahan> },
    /// e(nx) by recurrence, resynced from the exact residue every RESYNC terms.
    Walk { x: Abscissa, re: Kahan, im: Kahan },
}

impl Phase {
    fn new(x: &Abscissa) -> Self {
        match *x {
            Abscissa::Exact { p, q } if q <= CLASS_LIMIT => Phase::Classes {
                p,
                q,
                r: 0,
                acc: vec![Kahan::default(); q as usize],
            },
            _ => Phase::Walk { x: x.clone(), re: Kahan::default(), im: Kahan::default() },
        }
    }

    /// Feed c_n for n = lo, lo+1, … .
    fn feed(&mut self, lo: u64, c: &[f64]) {
        match self {
            Phase::Classes { q, r, acc, .. } => {
                let q = *q as usize;
                let mut idx = *r;
                if lo == 1 {
                    idx = 1 % q;
                }
                for &cn in c {
                    acc[idx].add(cn);
                    idx += 1;
                    if idx == q {
                        idx = 0;
                    }
                }
                *r = idx;
            }
            Phase::Walk { x, re, im } => {
                let step = {
                    let (s, co) = (2.0 * PI * x.centered_frac(1)).sin_cos();
                    Complex64::new(co, s)
                };
                for (j, chunk) in c.chunks(RESYNC).enumerate() {
                    let n0 = lo as u128 + (j * RESYNC) as u128;
                    let (s, co) = (2.0 * PI * x.centered_frac(n0)).sin_cos();
                    let mut z = Complex64::new(co, s);
                    let (mut a, mut b) = (0.0, 0.0);
                    for &cn in chunk {
                        a += cn * z.re;
                        b += cn * z.im;
                        z *= step;
                    }
                    re.add(a);
                    im.add(b);
                }
            }
        }
    }

    /// (Σ c_n cos, Σ c_n sin, rounding bound relative to Σ c_n).
    fn finish(&self) -> (f64, f64, f64) {
        match self {
            Phase::Classes { p, q, acc, .. } => {
                let (mut g, mut f) = (Kahan::default(), Kahan::default());
                let mut res = 0u128;
                for a in acc.iter() {
                    let (s, co) = (2.0 * PI * centered(res, *q)).sin_cos();
                    g.add(a.s * co);
                    f.add(a.s * s);
                    res += *p;
                    if res >= *q {
                        res -= *q;
                    }
                }
                (g.s, f.s, 12.0 * EPS)
            }
            Phase::Walk { re, im, .. } => {
                let phase_drift = RESYNC as f64 * 12.0 * EPS;
                (re.s, im.s, phase_drift + (RESYNC as f64 + 12.0) * EPS)
            }
        }
    }
}

/// Naive evaluation of many abscissae against one shared sieve pass.
///
/// The tail Σ_{n>N} c_n bounds the truncation error at every x. It is
/// certified by the smaller of the elementary bound (2 + ln N)/N, from
/// σ_{k−1}(n) ≤ n^{k−1}(1 + ln n), and the exact complement
/// ζ(2)ζ(k+1) − Σ_{n≤N} c_n with its own rounding and ζ bounds.
fn naive_batch(
    xs: &[Abscissa],
    k: u32,
    eps: f64,
    term_cap: u64,
) -> Result<Vec<(SeriesValue<f64>, SeriesValue<f64>)>> {
    let (z2, z2_err) = zeta(2)?;
    let (zk1, zk1_err) = zeta(k + 1)?;
    let total = z2 * zk1;
    let total_err = z2_err * zk1 + zk1_err * z2 + 2.0 * EPS * total;

    let mut phases: Vec<Phase> = xs.iter().map(Phase::new).collect();
    let mut sieve = SegmentedSigma::new(k - 1, 1, SIEVE_BLOCK);
    let mut sig = Vec::with_capacity(SIEVE_BLOCK);
    let mut c = Vec::with_capacity(SIEVE_BLOCK);
    let mut partial = Kahan::default();
    let mut n_used;
    loop {
        let lo = sieve.next_block(&mut sig);
        c.clear();
        for (i, &s) in sig.iter().enumerate() {
            let n = (lo + i as u64) as f64;
            c.push(s * (1.0 / n).powi(k as i32 + 1));
        }
        // only feed as much of the block as the stopping rule needs
        let mut take = c.len();
        let mut done = false;
        let mut run = partial;
        for (i, &cn) in c.iter().enumerate() {
            run.add(cn);
            if i % 1024 == 1023 || i + 1 == c.len() {
                let n = lo + i as u64;
                let cert = tail_certificate(n, total - run.s, total_err, run.s);
                if cert + 14.0 * RESYNC as f64 * EPS * run.s <= eps {
                    take = i + 1;
                    done = true;
                    break;
                }
            }
        }
        for ph in phases.iter_mut() {
            ph.feed(lo, &c[..take]);
        }
        for &cn in &c[..take] {
            partial.add(cn);
        }
        n_used = lo + take as u64 - 1;
        if done {
            break;
        }
        if n_used >= term_cap {
            return Err(Error::Resource(format!(
                "naive sum needs more than {term_cap} terms for eps {eps:e}"
            )));
        }
    }
    let tail = tail_certificate(n_used, total - partial.s, total_err, partial.s);
    let abs_sum = partial.s;
    Ok(phases
        .iter()
        .map(|ph| {
            let (g, f, rel) = ph.finish();
            let err = tail + (rel + 6.0 * EPS) * abs_sum;
            (SeriesValue::new(f, err, n_used), SeriesValue::new(g, err, n_used))
        })
        .collect())
}

fn tail_certificate(n: u64, complement: f64, total_err: f64, partial: f64) -> f64 {
    let nf = n as f64;
    let elementary = (2.0 + nf.ln()) / nf;
    let exact = complement.max(0.0) + total_err + 4.0 * EPS * partial;
    elementary.min(exact)
}

// ---------------------------------------------------------------------------
// public entry points

/// (F_k(x), G_k(x)), each within `eps` of the true value.
pub fn eval_series(
    x: impl Into<Abscissa>,
    k: u32,
    eps: f64,
    method: Method,
) -> Result<(SeriesValue<f64>, SeriesValue<f64>)> {
    eval_series_capped(x, k, eps, method, NAIVE_TERM_CAP)
}

/// [`eval_series`] with an explicit cap on naive terms.
pub fn eval_series_capped(
    x: impl Into<Abscissa>,
    k: u32,
    eps: f64,
    method: Method,
    term_cap: u64,
) -> Result<(SeriesValue<f64>, SeriesValue<f64>)> {
    let x = x.into();
    Ok(eval_series_batch(&[x], k, eps, method, term_cap)?.pop().unwrap())
}

/// Many abscissae at once. The naive method shares a single sieve pass.
pub fn eval_series_batch(
    xs: &[Abscissa],
    k: u32,
    eps: f64,
    method: Method,
    term_cap: u64,
) -> Result<Vec<(SeriesValue<f64>, SeriesValue<f64>)>> {
    check_k(k)?;
    check_eps(eps)?;
    match method {
        Method::Hyperbola => xs.iter().map(|x| hyperbola(x, k, eps)).collect(),
        Method::Naive => {
            if k - 1 > 4 {
                return Err(Error::Domain(format!("naive sieve supports k ≤ 5, got {k}")));
            }
            naive_batch(xs, k, eps, term_cap)
        }
    }
}

/// φ_k(x) = G_k(x) + i F_k(x) by the hyperbola method.
pub fn eval_phi(x: impl Into<Abscissa>, k: u32, eps: f64) -> Result<SeriesValue<Complex64>> {
    let (f, g) = eval_series(x, k, eps, Method::Hyperbola)?;
    Ok(SeriesValue::new(
        Complex64::new(g.value, f.value),
        f.error_bound + g.error_bound,
        f.terms_used,
    ))
}

/// The rational p/q as an abscissa.
pub fn rational_abscissa(p: i64, q: u64) -> Abscissa {
    Abscissa::from_rational(&BigRational::new(BigInt::from(p), BigInt::from(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::clausen::cl2;
    use crate::arith::{sigma, zeta_product_constant};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_forms_match_brute_force_inner_sums() {
        // Σ_d cos(2πdy)/d² = π²B₂({y}) and Σ_d sin(2πdy)/d² = Cl₂(2πy)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let y: f64 = rng.gen_range(-3.0..3.0);
            let (mut c, mut s) = (0.0, 0.0);
            for d in (1..=1_000_000u64).rev() {
                let df = d as f64;
                let (sn, cs) = (2.0 * PI * df * y).sin_cos();
                c += cs / (df * df);
                s += sn / (df * df);
            }
            let f = y - y.round();
            assert!((PI * PI * b2_frac(f) - c).abs() < 2e-6, "y={y}");
            assert!((cl2(2.0 * PI * y) - s).abs() < 1e-4, "y={y}");
        }
    }

    #[test]
    fn abscissa_residues_exact_and_fixed() {
        let x = rational_abscissa(2, 5);
        assert_eq!(x, Abscissa::Exact { p: 2, q: 5 });
        assert!((x.centered_frac(3) - 0.2).abs() < 1e-16);
        assert!((x.centered_frac(4) + 0.4).abs() < 1e-16);
        assert_eq!(rational_abscissa(-1, 3), Abscissa::Exact { p: 2, q: 3 });
        assert_eq!(Abscissa::from_f64(0.25), Abscissa::Exact { p: 1, q: 4 });
        let big = BigInt::one() << 300u32;
        let r = BigRational::new(&big / BigInt::from(3), big.clone());
        match Abscissa::from_rational(&r) {
            Abscissa::Fixed(v) => assert!((v as f64 * 2f64.powi(-128) - 1.0 / 3.0).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert_eq!(mulmod(123456789, 987654321, 1_000_000_007), 123456789u128 * 987654321 % 1_000_000_007);
    }

    #[test]
    fn trivial_values() {
        let (f, g) = eval_series(0.0, 2, 1e-12, Method::Hyperbola).unwrap();
        assert_eq!(f.value, 0.0);
        let z = zeta_product_constant(2).unwrap();
        assert!((g.value - z).abs() <= g.error_bound + 1e-14);
        let (f, _) = eval_series(0.5, 2, 1e-12, Method::Hyperbola).unwrap();
        assert!(f.value.abs() < 1e-15);
        for &x in &[0.3, 0.7] {
            let (f1, g1) = eval_series(x, 4, 1e-12, Method::Hyperbola).unwrap();
            let (f2, g2) = eval_series(1.0 - x, 4, 1e-12, Method::Hyperbola).unwrap();
            assert!((f1.value + f2.value).abs() < 1e-12);
            assert!((g1.value - g2.value).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbola_matches_direct_coefficient_sum() {
        // an independent short sum with σ from factorization plus the
        // elementary tail bound
        let n_max = 200_000u64;
        for &(p, q) in &[(1i64, 7u64), (3, 10), (5, 13)] {
            
            let (mut fs, mut gs) = (0.0, 0.0);
            for n in (1..=n_max).rev() {
                let c = sigma(1, n).unwrap().to_f64().unwrap() / (n as f64).powi(3);
                let ph = 2.0 * PI * ((n as i64 * p).rem_euclid(q as i64)) as f64 / q as f64;
                fs += c * ph.sin();
                gs += c * ph.cos();
            }
            let tail = (2.0 + (n_max as f64).ln()) / n_max as f64;
            let (f, g) = eval_series(rational_abscissa(p, q), 2, 1e-13, Method::Hyperbola).unwrap();
            assert!((f.value - fs).abs() <= tail + f.error_bound);
            assert!((g.value - gs).abs() <= tail + g.error_bound);
        }
    }

    #[test]
    fn naive_agrees_with_hyperbola() {
        let xs: Vec<Abscissa> =
            [(1, 3), (2, 7), (5, 12)].iter().map(|&(p, q)| rational_abscissa(p, q)).collect();
        let mut all = xs.clone();
        all.push(Abscissa::from_f64(0.123456789));
        let nv = eval_series_batch(&all, 2, 1e-6, Method::Naive, NAIVE_TERM_CAP).unwrap();
        for (x, (nf, ng)) in all.iter().zip(&nv) {
            assert!(nf.error_bound <= 1e-6);
            let (hf, hg) = eval_series(x.clone(), 2, 1e-13, Method::Hyperbola).unwrap();
            assert!(nf.agrees_with(&hf, 0.0), "{x:?}: {} vs {}", nf.value, hf.value);
            assert!(ng.agrees_with(&hg, 0.0), "{x:?}");
        }
    }

    #[test]
    fn naive_cap_and_floor_are_enforced() {
        let r = eval_series_capped(0.3, 2, 1e-12, Method::Naive, 1_000_000);
        assert!(matches!(r, Err(Error::Resource(_))));
        assert!(matches!(eval_series(0.3, 2, 1e-14, Method::Hyperbola), Err(Error::Domain(_))));
        assert!(matches!(eval_series(0.3, 3, 1e-10, Method::Hyperbola), Err(Error::Domain(_))));
    }

    #[test]
    fn huge_denominator_surrogate() {
        // golden-ratio convergent with a 2^200-scale denominator
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        for _ in 0..300 {
            let c = &a + &b;
            a = std::mem::replace(&mut b, c);
        }
        let x = BigRational::new(a.clone(), b.clone());
        let ab = Abscissa::from_rational(&x);
        assert!(matches!(ab, Abscissa::Fixed(_)));
        let (f, g) = eval_series(ab, 2, 1e-12, Method::Hyperbola).unwrap();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let (f2, g2) = eval_series(golden, 2, 1e-12, Method::Hyperbola).unwrap();
        // the f64 golden differs by ~1e-17, F₂ is Hölder-continuous
        assert!((f.value - f2.value).abs() < 1e-12);
        assert!((g.value - g2.value).abs() < 1e-12);
    }
}
