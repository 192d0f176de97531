//! Exact continued-fraction engine for the Gauss map T(x) = {1/x}.
//!
//! Everything is integer or rational arithmetic. Reals are stood in for by
//! rationals with a prescribed quotient list, so identities such as the
//! determinant identity can be asserted with zero tolerance.
//!
//! Numbers built from long lists of huge quotients reach millions of bits,
//! where a single gcd costs seconds. Orbits of such numbers are therefore
//! built from continuant recurrences, whose fractions are reduced by
//! construction, and β values may be stored unreduced (see
//! [`GaussOrbit::beta`]). Comparisons go through cross multiplication.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

pub type ExactRational = BigRational;

/// Below this many bits gcd reduction is cheap enough to always apply.
const REDUCE_BITS: u64 = 1 << 14;

// ---------------------------------------------------------------------------
// big-number helpers

/// 2^e as f64, flushing to 0 or ∞ outside the representable range.
pub fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let mut m = m;
    let mut e = e;
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return 0.0;
        }
    }
    m * 2f64.powi(e as i32)
}

/// (top 64 bits as f64, shift) with `n ≈ top · 2^shift`.
fn top_bits(n: &BigUint) -> (f64, i64) {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64, 0);
    }
    let shift = bits - 64;
    ((n >> shift).to_u64().unwrap() as f64, shift as i64)
}

/// Natural log of a positive big integer, accurate to a few ulp.
pub fn ln_big(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "ln of zero");
    let (m, s) = top_bits(n);
    m.ln() + s as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_big(n.magnitude())
}

/// num/den as f64 without overflow in the intermediate integers.
pub fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (mn, sn) = top_bits(num.magnitude());
    let (md, sd) = top_bits(den.magnitude());
    let v = ldexp(mn / md, sn - sd);
    if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -v
    } else {
        v
    }
}

pub fn rational_f64(x: &BigRational) -> f64 {
    ratio_f64(x.numer(), x.denom())
}

/// ln(num/den) for a positive ratio.
pub fn ln_ratio(num: &BigInt, den: &BigInt) -> f64 {
    ln_bigint(num) - ln_bigint(den)
}

/// Exact comparison by cross multiplication; valid for unreduced operands
/// with positive denominators.
pub fn cmp_rational(a: &BigRational, b: &BigRational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// a ± b without gcd reduction when the operands are large.
pub fn add_lazy(a: &BigRational, b: &BigRational) -> BigRational {
    let n = a.numer() * b.denom() + b.numer() * a.denom();
    let d = a.denom() * b.denom();
    make(n, d)
}

pub fn sub_lazy(a: &BigRational, b: &BigRational) -> BigRational {
    let n = a.numer() * b.denom() - b.numer() * a.denom();
    let d = a.denom() * b.denom();
    make(n, d)
}

/// Reduce when cheap, otherwise keep the raw pair (denominator made positive).
fn make(n: BigInt, d: BigInt) -> BigRational {
    let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
    if d.bits().max(n.bits()) <= REDUCE_BITS {
        BigRational::new(n, d)
    } else {
        BigRational::new_raw(n, d)
    }
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

// ---------------------------------------------------------------------------
// RealSpec

/// A real input: exact rational, quotient list `[0; a1, a2, …]`, or decimal.
#[derive(Clone, Debug, PartialEq)]
pub enum RealSpec {
    Rational(BigRational),
    Quotients(Vec<BigUint>),
    Decimal(String),
}

impl FromStr for RealSpec {
    type Err = Error;

    /// Grammar: `rational:<p>/<q>`, `cf:[a1,a2,...]`, `decimal:<digits>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Parse(format!("{m}: {s:?}"));
        if let Some(r) = s.strip_prefix("rational:") {
            let (p, q) = r.split_once('/').ok_or_else(|| bad("expected p/q"))?;
            let p = BigInt::from_str(p.trim()).map_err(|_| bad("bad numerator"))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad("bad denominator"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(RealSpec::Rational(BigRational::new(p, q)))
        } else if let Some(r) = s.strip_prefix("cf:") {
            let inner = r
                .trim()
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| bad("expected [a1,...]"))?;
            let mut out = Vec::new();
            for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let a = BigUint::from_str(tok).map_err(|_| bad("bad quotient"))?;
                if a.is_zero() {
                    return Err(bad("quotients must be ≥ 1"));
                }
                out.push(a);
            }
            Ok(RealSpec::Quotients(out))
        } else if let Some(r) = s.strip_prefix("decimal:") {
            decimal_to_rational(r)?;
            Ok(RealSpec::Decimal(r.trim().to_string()))
        } else {
            Err(bad("unknown real spec (use rational:, cf: or decimal:)"))
        }
    }
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Rational(r) => write!(f, "rational:{}/{}", r.numer(), r.denom()),
            RealSpec::Quotients(a) => {
                write!(f, "cf:[")?;
                for (i, v) in a.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if v.bits() > 64 {
                        write!(f, "<{} bits>", v.bits())?;
                    } else {
                        write!(f, "{v}")?;
                    }
                }
                write!(f, "]")
            }
            RealSpec::Decimal(d) => write!(f, "decimal:{d}"),
        }
    }
}

fn decimal_to_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed decimal {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let d = num_traits::pow(int(10), fp.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// A parsed real: its exact value, plus the quotient list it came from.
#[derive(Clone, Debug)]
pub struct RealNumber {
    value: BigRational,
    quotients: Option<Vec<BigUint>>,
}

/// Resolve a spec to an exact value. Quotient lists are kept losslessly.
pub fn parse_real(spec: &RealSpec) -> Result<RealNumber> {
    match spec {
        RealSpec::Rational(r) => Ok(RealNumber {
            value: r.clone(),
            quotients: None,
        }),
        RealSpec::Decimal(d) => Ok(RealNumber {
            value: decimal_to_rational(d)?,
            quotients: None,
        }),
        RealSpec::Quotients(a) => {
            if a.iter().any(|v| v.is_zero()) {
                return Err(Error::Parse("quotients must be ≥ 1".into()));
            }
            Ok(RealNumber::from_quotients(a.clone()))
        }
    }
}

impl RealNumber {
    pub fn from_rational(value: BigRational) -> Self {
        Self {
            value,
            quotients: None,
        }
    }

    /// x = [0; a1, …, aN], evaluated by continuants (reduced by construction).
    pub fn from_quotients(a: Vec<BigUint>) -> Self {
        let (mut p0, mut p1) = (int(1), int(0)); // p_{-1}, p_0
        let (mut q0, mut q1) = (int(0), int(1));
        for ai in &a {
            let ai = BigInt::from(ai.clone());
            let p2 = &ai * &p1 + &p0;
            let q2 = &ai * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
        }
        Self {
            value: BigRational::new_raw(p1, q1),
            quotients: Some(a),
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn quotients(&self) -> Option<&[BigUint]> {
        self.quotients.as_deref()
    }

    pub fn to_f64(&self) -> f64 {
        rational_f64(&self.value)
    }

    /// Gauss orbit to at most `max_depth` steps. Quotient-backed numbers use
    /// their list; plain rationals are expanded by the Gauss map.
    pub fn orbit(&self, max_depth: usize) -> Result<GaussOrbit> {
        match &self.quotients {
            Some(a) => GaussOrbit::from_quotients(a, max_depth),
            None => expand_cf(&self.value, max_depth),
        }
    }
}

// ---------------------------------------------------------------------------
// GaussOrbit

/// Per-depth record of the Gauss orbit of x ∈ (0,1).
///
/// Index conventions: quotients `a(1..=n)`, convergents `p(k), q(k)` for
/// `k ≥ −2`, iterates `t(0..=n)`, `beta(−1..=n)`, `gamma(0..=n)`.
#[derive(Clone, Debug)]
pub struct GaussOrbit {
    x: BigRational,
    a: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    t: Vec<BigRational>,
    beta: Vec<BigRational>,
    gamma: Vec<f64>,
    terminated: bool,
    /// Length of the underlying quotient list (None for Gauss-map expansions).
    list_len: Option<usize>,
}

/// Expand a rational in (0,1) by the Gauss map, stopping at `T^n = 0` or
/// at `max_depth`.
pub fn expand_cf(x: &BigRational, max_depth: usize) -> Result<GaussOrbit> {
    if !x.is_positive() || x >= &BigRational::one() {
        return domain("expand_cf needs 0 < x < 1; reduce mod 1 first");
    }
    let mut a = Vec::new();
    let mut t = vec![x.clone()];
    let mut cur = x.clone();
    while a.len() < max_depth && !cur.is_zero() {
        let inv = cur.recip();
        let ai = inv.floor();
        cur = &inv - &ai;
        a.push(ai.to_integer());
        t.push(cur.clone());
    }
    let terminated = cur.is_zero();
    Ok(GaussOrbit::assemble(x.clone(), a, t, terminated, None))
}

impl GaussOrbit {
    /// Orbit of `[0; a1, …, aN]` to depth `min(max_depth, N)`, with iterates
    /// T^k = [0; a_{k+1}, …, a_N] from the backward continuant recurrence.
    pub fn from_quotients(list: &[BigUint], max_depth: usize) -> Result<Self> {
        if list.iter().any(|v| v.is_zero()) {
            return domain("quotients must be ≥ 1");
        }
        let n_all = list.len();
        let depth = max_depth.min(n_all);
        // tails: T^k = num_k / den_k with T^N = 0/1
        let mut num = vec![int(0); n_all + 1];
        let mut den = vec![int(1); n_all + 1];
        for k in (0..n_all).rev() {
            let ak = BigInt::from(list[k].clone());
            num[k] = den[k + 1].clone();
            den[k] = &ak * &den[k + 1] + &num[k + 1];
        }
        let x = BigRational::new_raw(num[0].clone(), den[0].clone());
        let t: Vec<BigRational> = (0..=depth)
            .map(|k| BigRational::new_raw(num[k].clone(), den[k].clone()))
            .collect();
        let a: Vec<BigInt> = list[..depth].iter().map(|v| BigInt::from(v.clone())).collect();
        let terminated = depth == n_all;
        Ok(Self::assemble(x, a, t, terminated, Some(n_all)))
    }

    fn assemble(
        x: BigRational,
        a: Vec<BigInt>,
        t: Vec<BigRational>,
        terminated: bool,
        list_len: Option<usize>,
    ) -> Self {
        let n = a.len();
        // p_{-2}, p_{-1}, p_0 and q_{-2}, q_{-1}, q_0
        let mut p = vec![int(0), int(1), int(0)];
        let mut q = vec![int(1), int(0), int(1)];
        for ai in &a {
            let k = p.len();
            p.push(ai * &p[k - 1] + &p[k - 2]);
            q.push(ai * &q[k - 1] + &q[k - 2]);
        }
        let mut beta = Vec::with_capacity(n + 2);
        beta.push(BigRational::one());
        for k in 0..=n {
            // β_k = (−1)^{k−1}(p_k − q_k x) = |q_k x − p_k|
            let v = &q[k + 2] * x.numer() - &p[k + 2] * x.denom();
            beta.push(make(v.abs(), x.denom().clone()));
        }
        let mut gamma = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let tk = &t[k];
            let g = if tk.is_zero() {
                f64::INFINITY
            } else {
                let b = rational_f64(&beta[k]);
                b * ln_ratio(tk.denom(), tk.numer())
            };
            gamma.push(g);
        }
        Self {
            x,
            a,
            p,
            q,
            t,
            beta,
            gamma,
            terminated,
            list_len,
        }
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    /// Number of quotients computed.
    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// True when T^depth = 0, i.e. the whole expansion is present.
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// Length of the backing quotient list, if any.
    pub fn list_len(&self) -> Option<usize> {
        self.list_len
    }

    /// a_k for 1 ≤ k ≤ depth.
    pub fn a(&self, k: usize) -> &BigInt {
        &self.a[k - 1]
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.a
    }

    /// p_k for −2 ≤ k ≤ depth.
    pub fn p(&self, k: i64) -> &BigInt {
        &self.p[(k + 2) as usize]
    }

    pub fn q(&self, k: i64) -> &BigInt {
        &self.q[(k + 2) as usize]
    }

    /// T^k(x) for 0 ≤ k ≤ depth.
    pub fn t(&self, k: usize) -> &BigRational {
        &self.t[k]
    }

    /// β_k = |q_k x − p_k| for −1 ≤ k ≤ depth. May be unreduced when large.
    pub fn beta(&self, k: i64) -> &BigRational {
        &self.beta[(k + 1) as usize]
    }

    /// γ_k = β_{k−1} log(1/T^k x); infinite when T^k = 0.
    pub fn gamma(&self, k: usize) -> f64 {
        self.gamma[k]
    }

    pub fn t_f64(&self, k: usize) -> f64 {
        rational_f64(&self.t[k])
    }

    pub fn beta_f64(&self, k: i64) -> f64 {
        rational_f64(self.beta(k))
    }

    pub fn q_f64(&self, k: i64) -> f64 {
        let q = self.q(k);
        if q.bits() > 1000 {
            f64::INFINITY
        } else {
            q.to_f64().unwrap()
        }
    }

    /// ln q_k (q_k ≥ 1 for k ≥ 0).
    pub fn ln_q(&self, k: i64) -> f64 {
        ln_bigint(self.q(k))
    }

    /// The open basic interval I_k(x), endpoints p_k/q_k and
    /// (p_k + p_{k−1})/(q_k + q_{k−1}), returned in increasing order.
    pub fn interval(&self, k: usize) -> (BigRational, BigRational) {
        let k = k as i64;
        let e1 = BigRational::new_raw(self.p(k).clone(), self.q(k).clone());
        let e2 = BigRational::new_raw(
            self.p(k) + self.p(k - 1),
            self.q(k) + self.q(k - 1),
        );
        if cmp_rational(&e1, &e2) == Ordering::Less {
            (e1, e2)
        } else {
            (e2, e1)
        }
    }

    /// p(k): the smaller endpoint of I_k(x).
    pub fn smaller_endpoint(&self, k: usize) -> BigRational {
        self.interval(k).0
    }

    pub fn in_interval(&self, k: usize, y: &BigRational) -> bool {
        let (lo, hi) = self.interval(k);
        cmp_rational(&lo, y) == Ordering::Less && cmp_rational(y, &hi) == Ordering::Less
    }

    /// Deepest index whose orbit data is a faithful stand-in for the
    /// irrational the list approximates (guard of 4 for lookahead).
    pub fn certified_depth(&self) -> usize {
        match self.list_len {
            Some(n) => n.saturating_sub(4).min(self.depth()),
            None => self.depth(),
        }
    }
}

/// (−1)^k β_k Σ_{j≤k} (−1)^j T^j/β_j², which should equal q_k.
pub fn qk_identity_check(orbit: &GaussOrbit, k: usize) -> Result<BigRational> {
    if k > orbit.depth() || (k == orbit.depth() && orbit.terminated()) {
        return domain(format!(
            "k = {k} is at or beyond termination (depth {})",
            orbit.depth()
        ));
    }
    let mut s = BigRational::zero();
    for j in 0..=k {
        let b = orbit.beta(j as i64);
        let term = orbit.t(j) / (b * b);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    let v = orbit.beta(k as i64) * s;
    Ok(if k % 2 == 0 { v } else { -v })
}

/// Every exact orbit identity at every index of `o`; returns the failures.
///
/// Covered: the convergent determinant, Fib_{k+1} ≤ q_k, the β_k bracket
/// and its closed form through T^{k+1}, the signed form of β_k, T^k as a
/// Möbius image of x, the β recurrence, Σ q_j ≤ 3q_k, the q_k identity and
/// the bracket q_k/(2q_{k+1}) ≤ T^k ≤ 2q_k/q_{k+1}.
pub fn orbit_identity_failures(o: &GaussOrbit) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: &str, k: i64| {
        if !ok {
            bad.push(format!("{what} at k = {k}"));
        }
    };
    let n = o.depth() as i64;
    let x = o.x();
    let rat = |v: &BigInt| BigRational::from_integer(v.clone());
    for k in -1..=n {
        if k >= 0 {
            let det = o.p(k) * o.q(k - 1) - o.p(k - 1) * o.q(k);
            check(det == int(if (k - 1) % 2 == 0 { 1 } else { -1 }), "determinant", k);
            check(fib(k as usize + 1) <= *o.q(k), "Fibonacci lower bound", k);
        }
        let live = k < n || !o.terminated();
        if k < n && live {
            let b = o.beta(k);
            let lo = BigRational::new(int(1), o.q(k) + o.q(k + 1));
            let hi = BigRational::new(int(1), o.q(k + 1).clone());
            check(
                cmp_rational(&lo, b) != Ordering::Greater && cmp_rational(b, &hi) != Ordering::Greater,
                "beta bracket",
                k,
            );
            let t1 = o.t((k + 1) as usize);
            let want = (rat(o.q(k + 1)) + t1 * rat(o.q(k))).recip();
            check(cmp_rational(b, &want) == Ordering::Equal, "beta closed form", k);
        }
        if k >= 0 {
            let signed = rat(o.p(k)) - rat(o.q(k)) * x;
            let signed = if (k - 1).rem_euclid(2) == 0 { signed } else { -signed };
            check(cmp_rational(o.beta(k), &signed) == Ordering::Equal, "signed beta", k);
            let num = rat(o.q(k)) * x - rat(o.p(k));
            let den = rat(o.p(k - 1)) - rat(o.q(k - 1)) * x;
            check(cmp_rational(o.t(k as usize), &(num / den)) == Ordering::Equal, "iterate as Mobius image", k);
            let rhs = (BigRational::one() - rat(o.q(k - 1)) * o.beta(k)) / rat(o.q(k));
            check(cmp_rational(o.beta(k - 1), &rhs) == Ordering::Equal, "beta recurrence", k);
            let s: BigInt = (0..=k).map(|j| o.q(j).clone()).sum();
            check(s <= int(3) * o.q(k), "denominator sum", k);
            if live {
                let ok = qk_identity_check(o, k as usize).map(|v| v == rat(o.q(k))).unwrap_or(false);
                check(ok, "q_k identity", k);
            }
        }
        if k >= 0 && k < n && live {
            let tk = o.t(k as usize);
            let lo = BigRational::new(o.q(k).clone(), int(2) * o.q(k + 1));
            let hi = BigRational::new(int(2) * o.q(k), o.q(k + 1).clone());
            check(&lo <= tk && tk <= &hi, "iterate bracket", k);
        }
    }
    bad
}

/// K_h: the largest K with x + h ∈ I_k(x) for every k ≤ K.
pub fn locate_depth(orbit: &GaussOrbit, h: &BigRational) -> Result<usize> {
    if h.is_zero() {
        return domain("h must be non-zero");
    }
    let y = add_lazy(orbit.x(), h);
    if !y.is_positive() || cmp_rational(&y, &BigRational::one()) != Ordering::Less {
        return domain("x + h leaves (0,1)");
    }
    // list-backed orbits sit on the boundary of I_N, so only indices below
    // the list end can be decided
    let last = match orbit.list_len() {
        Some(n) => orbit.depth().min(n.saturating_sub(1)),
        None => orbit.depth(),
    };
    for k in 1..=last {
        if !orbit.in_interval(k, &y) {
            return Ok(k - 1);
        }
    }
    if orbit.terminated() && orbit.list_len().is_none() {
        return Ok(orbit.depth());
    }
    Err(Error::Depth(format!(
        "x + h shares the first {last} quotients; orbit too shallow to certify K_h"
    )))
}

/// Both clauses of the K_h bracket: (1/(2q_{K+2}q_{K+3}) ≤ |h|, |h| ≤ 2/q_K²)
/// and the refined lower bound 1/(2q_{K+1}q_{K+2}) ≤ |h|.
pub fn kh_bracket(orbit: &GaussOrbit, k: usize, h: &BigRational) -> Result<(bool, bool, bool)> {
    if k + 3 > orbit.depth() {
        return Err(Error::Depth(format!("bracket at K = {k} needs q_{}", k + 3)));
    }
    let ha = h.abs();
    let k = k as i64;
    let two = int(2);
    let lower = BigRational::new_raw(int(1), &two * orbit.q(k + 2) * orbit.q(k + 3));
    let lower_refined = BigRational::new_raw(int(1), &two * orbit.q(k + 1) * orbit.q(k + 2));
    let upper = BigRational::new_raw(two, orbit.q(k) * orbit.q(k));
    Ok((
        cmp_rational(&lower, &ha) != Ordering::Greater,
        cmp_rational(&ha, &upper) != Ordering::Greater,
        cmp_rational(&lower_refined, &ha) != Ordering::Greater,
    ))
}

/// Fibonacci numbers with Fib_1 = Fib_2 = 1.
pub fn fib(n: usize) -> BigInt {
    let (mut a, mut b) = (int(0), int(1));
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// Reduce a rational into [0, 1).
pub fn frac(x: &BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// Exact {e·p/q} numerators modulo q as a running residue.
pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::ToBigInt;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(int(p), int(q))
    }

    fn ones(n: usize, v: u32) -> RealSpec {
        RealSpec::Quotients(vec![BigUint::from(v); n])
    }

    #[test]
    fn parse_examples() {
        for s in ["rational:2/5", "cf:[2,2]", "decimal:0.4"] {
            let spec: RealSpec = s.parse().unwrap();
            let x = parse_real(&spec).unwrap();
            assert_eq!(cmp_rational(x.value(), &r(2, 5)), Ordering::Equal, "{s}");
        }
        assert!("rational:1/0".parse::<RealSpec>().is_err());
        assert!("cf:[1,0]".parse::<RealSpec>().is_err());
        assert!("decimal:0.4.1".parse::<RealSpec>().is_err());
        assert!("pi".parse::<RealSpec>().is_err());
        let d: RealSpec = "decimal:-1.25".parse().unwrap();
        assert_eq!(*parse_real(&d).unwrap().value(), r(-5, 4));
        assert_eq!("cf:[1,2,3]".parse::<RealSpec>().unwrap().to_string(), "cf:[1,2,3]");
    }

    #[test]
    fn expand_two_fifths() {
        let o = expand_cf(&r(2, 5), 10).unwrap();
        assert_eq!(o.depth(), 2);
        assert_eq!(o.quotients(), &[int(2), int(2)]);
        assert_eq!((o.p(1), o.q(1)), (&int(1), &int(2)));
        assert_eq!((o.p(2), o.q(2)), (&int(2), &int(5)));
        assert!(o.t(2).is_zero());
        assert!(o.terminated());
        let o = expand_cf(&r(1, 3), 10).unwrap();
        assert_eq!(o.quotients(), &[int(3)]);
        assert_eq!(*o.beta(0), r(1, 3));
        assert!(expand_cf(&r(3, 2), 5).is_err());
        assert!(expand_cf(&r(0, 1), 5).is_err());
    }

    #[test]
    fn all_ones_gives_fibonacci() {
        let x = parse_real(&ones(12, 1)).unwrap();
        let o = x.orbit(12).unwrap();
        for k in 0..=12i64 {
            assert_eq!(*o.q(k), fib(k as usize + 1));
        }
    }

    #[test]
    fn list_and_gauss_map_orbits_agree() {
        let spec = RealSpec::Quotients([3u32, 1, 4, 1, 5, 9, 2, 6].map(BigUint::from).to_vec());
        let x = parse_real(&spec).unwrap();
        let a = x.orbit(20).unwrap();
        let b = expand_cf(&BigRational::new(x.value().numer().clone(), x.value().denom().clone()), 20)
            .unwrap();
        assert_eq!(a.depth(), b.depth());
        for k in 0..=a.depth() {
            assert_eq!(cmp_rational(a.t(k), b.t(k)), Ordering::Equal);
            assert_eq!(cmp_rational(a.beta(k as i64), b.beta(k as i64)), Ordering::Equal);
            assert_eq!(a.q(k as i64), b.q(k as i64));
        }
    }

    #[test]
    fn qk_identity_examples() {
        let o = expand_cf(&r(2, 5), 10).unwrap();
        assert_eq!(qk_identity_check(&o, 0).unwrap(), r(1, 1));
        assert_eq!(qk_identity_check(&o, 1).unwrap(), r(2, 1));
        assert!(qk_identity_check(&o, 2).is_err());
    }

    fn check_orbit(o: &GaussOrbit) {
        let bad = orbit_identity_failures(o);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn exhaustive_identities_small_denominators() {
        for q in 2..=50i64 {
            for p in 1..q {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let o = expand_cf(&r(p, q), 100).unwrap();
                check_orbit(&o);
            }
        }
    }

    #[test]
    fn gamma_bracket() {
        let x = parse_real(&ones(30, 2)).unwrap();
        let o = x.orbit(30).unwrap();
        for k in 0..25usize {
            let g = o.gamma(k);
            let qk = o.q_f64(k as i64);
            let lo = (o.ln_q(k as i64 + 1) - (2.0 * qk).ln()) / qk;
            let hi = (o.ln_q(k as i64 + 1) + 2f64.ln()) / qk;
            assert!(lo <= g * (1.0 + 1e-14) && g <= hi * (1.0 + 1e-14), "k={k}");
        }
    }

    #[test]
    fn locate_depth_examples() {
        let gold = parse_real(&ones(40, 1)).unwrap().orbit(40).unwrap();
        let h = r(1, 100);
        let k = locate_depth(&gold, &h).unwrap();
        // scan by hand: in I_k for k ≤ K, not in I_{K+1}
        let y = gold.x() + &h;
        for j in 1..=k {
            assert!(gold.in_interval(j, &y));
        }
        assert!(!gold.in_interval(k + 1, &y));
        let (lo, hi, _) = kh_bracket(&gold, k, &h).unwrap();
        assert!(lo && hi);

        let silver = parse_real(&ones(40, 2)).unwrap().orbit(40).unwrap();
        let h = r(-1, 1000);
        let k = locate_depth(&silver, &h).unwrap();
        let (lo, hi, refined) = kh_bracket(&silver, k, &h).unwrap();
        assert!(lo && hi && refined);

        // leaving the first interval entirely
        assert_eq!(locate_depth(&gold, &r(-3, 10)).unwrap(), 0);
        assert!(locate_depth(&gold, &r(1, 1)).is_err());
        // too small an h for a 40-term surrogate
        let tiny = BigRational::new(int(1), num_traits::pow(int(10), 30));
        assert!(matches!(locate_depth(&gold, &tiny), Err(Error::Depth(_))));
    }

    #[test]
    fn huge_quotients_stay_cheap() {
        let big = BigUint::one() << 200_000u32;
        let spec = RealSpec::Quotients(vec![BigUint::from(3u32), big, BigUint::from(2u32), BigUint::from(2u32)]);
        let t = std::time::Instant::now();
        let o = parse_real(&spec).unwrap().orbit(10).unwrap();
        assert!(t.elapsed().as_secs_f64() < 5.0);
        assert!(o.q(2).bits() > 200_000);
        assert!((o.ln_q(2) - (200_000.0 * 2f64.ln() + 3f64.ln())).abs() < 1e-6);
        assert!(o.beta_f64(3) == 0.0);
        assert!(o.gamma(1) > 0.0);
    }

    #[test]
    fn float_helpers() {
        let n = int(3).to_bigint().unwrap() << 3000usize;
        let d = int(7) << 3000usize;
        assert!((ratio_f64(&n, &d) - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(ratio_f64(&int(1), &(int(1) << 5000usize)), 0.0);
        assert!((ln_big(&(BigUint::one() << 4000u32)) - 4000.0 * 2f64.ln()).abs() < 1e-9);
        assert_eq!(ldexp(1.5, -1100), 1.5 * 2f64.powi(-1000) * 2f64.powi(-100));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn random_lists_satisfy_identities(list in proptest::collection::vec(1u32..40, 1..25)) {
                let spec = RealSpec::Quotients(list.iter().map(|&v| BigUint::from(v)).collect());
                let o = parse_real(&spec).unwrap().orbit(100).unwrap();
                check_orbit(&o);
            }

            #[test]
            fn locate_depth_is_consistent(list in proptest::collection::vec(1u32..6, 30..40),
                                          hn in 1i64..1000, e in 2u32..9, neg in any::<bool>()) {
                let spec = RealSpec::Quotients(list.iter().map(|&v| BigUint::from(v)).collect());
                let o = parse_real(&spec).unwrap().orbit(100).unwrap();
                let h = BigRational::new(int(if neg { -hn } else { hn }), num_traits::pow(int(10), e as usize));
                let y = add_lazy(o.x(), &h);
                prop_assume!(y.is_positive() && y < BigRational::one());
                let k = locate_depth(&o, &h).unwrap();
                for j in 1..=k { prop_assert!(o.in_interval(j, &y)); }
                prop_assert!(!o.in_interval(k + 1, &y));
                if let Ok((lo, hi, _)) = kh_bracket(&o, k, &h) {
                    prop_assert!(lo && hi);
                }
            }
        }
    }
}
