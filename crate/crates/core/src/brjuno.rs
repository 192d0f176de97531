//! Brjuno-type sums, approximation exponents, constructors for numbers with
//! extreme continued fractions, and the difference-quotient scan that
//! witnesses non-differentiability of F₂.
//!
//! Every verdict here is a finite-depth one. The report exposes the partial
//! sums and increments it was based on.
//!
//! The report works from the quotient list in the log domain:
//!   ln q_{n+1} = ln q_n + ln(a_{n+1} + q_{n−1}/q_n),
//!   ln(1/T^n) = ln(a_{n+1} + T^{n+1}),
//!   β_n = 1/(q_{n+1} + T^{n+1} q_n),
//! so quotients of a million bits cost no more than small ones.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::analytic::{eval_series, Abscissa, Method};
use crate::contfrac::{cmp_rational, expand_cf, ln_big, ln_ratio, parse_real, sub_lazy, RealNumber, RealSpec};
use crate::error::{domain, Error, Result};
use crate::funceq::DIVERGENCE_THRESHOLD;

/// Default bit cap for constructed quotients.
pub const DEFAULT_MEM_CAP_BITS: u64 = 1_000_000;

/// Environment variable overriding the quotient bit cap.
pub const MEM_CAP_ENV: &str = "FSERIES_MEM_CAP_BITS";

/// Exponents k for which Σ log q_{n+1}/q_n^k is reported.
pub const BRJUNO_EXPONENTS: [u32; 4] = [1, 2, 4, 6];

/// An increment below this counts as converged at depth.
pub const CONVERGED_INCREMENT: f64 = 1e-6;

/// The (∗)/(∗∗) sequences must stay below this over the late window.
pub const STAR_TOLERANCE: f64 = 0.5;

/// Number of final indices used for the limsup/liminf estimates of κ.
pub const KAPPA_WINDOW: usize = 3;

/// Relative slack on the float comparisons of the bracket checks.
const BRACKET_SLACK: f64 = 1e-12;

/// Quotient bit cap, from the environment or the default.
pub fn mem_cap_bits() -> u64 {
    std::env::var(MEM_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&b| b >= 64)
        .unwrap_or(DEFAULT_MEM_CAP_BITS)
}

// ---------------------------------------------------------------------------
// Log-domain orbit data

/// Per-index logs of the continued-fraction data of a quotient list.
#[derive(Clone, Debug)]
struct LogOrbit {
    /// ln q_n for 0 ≤ n ≤ N.
    ln_q: Vec<f64>,
    /// ln(1/T^n) for 0 ≤ n < N.
    ln_inv_t: Vec<f64>,
    /// ln β_n for −1 ≤ n < N, stored at n + 1.
    ln_beta: Vec<f64>,
    max_bits: Vec<u64>,
}

fn ln_sum_big(a: &BigUint, small: f64) -> f64 {
    // ln(a + s) for 0 ≤ s ≤ 1
    match a.to_f64() {
        Some(af) if af.is_finite() => ln_big(a) + (small / af).ln_1p(),
        _ => ln_big(a),
    }
}

impl LogOrbit {
    fn new(list: &[BigUint]) -> Self {
        let n = list.len();
        // forward: ln q and r_n = q_{n−1}/q_n
        let mut ln_q = vec![0.0; n + 1];
        let mut r = 0.0;
        for k in 0..n {
            ln_q[k + 1] = ln_q[k] + ln_sum_big(&list[k], r);
            let af = list[k].to_f64().unwrap_or(f64::INFINITY);
            r = 1.0 / (af + r);
        }
        // backward: t_m = T^m as f64, T^N = 0
        let mut t = vec![0.0; n + 1];
        let mut ln_inv_t = vec![0.0; n];
        for m in (0..n).rev() {
            ln_inv_t[m] = ln_sum_big(&list[m], t[m + 1]);
            let af = list[m].to_f64().unwrap_or(f64::INFINITY);
            t[m] = 1.0 / (af + t[m + 1]);
        }
        let mut ln_beta = vec![0.0; n + 1];
        for k in 0..n {
            // β_k = 1/(q_{k+1} + T^{k+1} q_k)
            let ratio = (ln_q[k] - ln_q[k + 1]).exp();
            ln_beta[k + 1] = -(ln_q[k + 1] + (t[k + 1] * ratio).ln_1p());
        }
        let max_bits = list.iter().map(|a| a.bits()).collect();
        Self { ln_q, ln_inv_t, ln_beta, max_bits }
    }

    fn ln_beta(&self, k: i64) -> f64 {
        self.ln_beta[(k + 1) as usize]
    }
}

/// log(L)/q^k from ln L and ln q; zero when L = 1.
fn log_over_power(ln_num: f64, ln_q: f64, k: f64) -> f64 {
    if ln_num <= 0.0 {
        0.0
    } else {
        (ln_num.ln() - k * ln_q).exp()
    }
}

/// Quotient list of a real in (0,1), full length for rationals.
fn quotient_list(x: &RealSpec) -> Result<Vec<BigUint>> {
    if let RealSpec::Quotients(a) = x {
        if a.iter().any(|v| v.is_zero()) {
            return Err(Error::Parse("quotients must be ≥ 1".into()));
        }
        return Ok(a.clone());
    }
    let num = parse_real(x)?;
    let v = num.value();
    if !v.is_positive() || v >= &BigRational::one() {
        return domain("x must lie in (0, 1)");
    }
    let orbit = expand_cf(v, usize::MAX)?;
    Ok(orbit.quotients().iter().map(|a| a.magnitude().clone()).collect())
}

// ---------------------------------------------------------------------------
// BrjunoReport

/// Finite-depth verdict on Σ log q_{n+1}/q_n².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareBrjunoVerdict {
    /// Last increment below [`CONVERGED_INCREMENT`].
    ConvergentAtDepth,
    /// Sum above the divergence threshold and the last three increments
    /// positive and growing.
    DivergentAtDepth,
    /// A quotient within reach hit the bit cap, so the tail is not the
    /// tail of the intended number.
    Saturated,
    Undecided,
}

impl fmt::Display for SquareBrjunoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareBrjunoVerdict::ConvergentAtDepth => "convergent_at_depth",
            SquareBrjunoVerdict::DivergentAtDepth => "divergent_at_depth",
            SquareBrjunoVerdict::Saturated => "saturated",
            SquareBrjunoVerdict::Undecided => "undecided",
        })
    }
}

/// Brjuno-type sums and approximation exponents of x up to a depth.
///
/// Vectors indexed by n run over 0 ≤ n ≤ depth.
#[derive(Clone, Debug, Serialize)]
pub struct BrjunoReport {
    pub depth: usize,
    /// k ↦ partial sums Σ_{m≤n} log q_{m+1}/q_m^k.
    pub brjuno_sums: BTreeMap<u32, Vec<f64>>,
    /// Terms log q_{n+1}/q_n² of the square-Brjuno sum.
    pub increments: Vec<f64>,
    /// Partial sums Σ_{m≤n} β_{m−1}γ_m.
    pub beta_gamma_sum: Vec<f64>,
    /// Per-depth truth of the two inequalities relating the square-Brjuno
    /// sum and the β·γ sum.
    pub bracket_ok: Vec<(bool, bool)>,
    /// log q_{n+4}/q_n².
    pub star_sequence: Vec<f64>,
    /// log q_{n+3}/q_n².
    pub starstar_sequence: Vec<f64>,
    /// The star sequence stays below [`STAR_TOLERANCE`] for n ≥ depth/2.
    pub star_ok: bool,
    /// As `star_ok` for the starstar sequence, and no a_n = 1 in that window.
    pub starstar_ok: bool,
    /// κ_n from |x − p_n/q_n| = q_n^{−κ_n}; None while q_n = 1.
    pub kappa: Vec<Option<f64>>,
    /// sup_{n ≤ m ≤ depth} κ_m.
    pub kappa_tail_sup: Vec<Option<f64>>,
    /// Per-n truth of log(q_n q_{n+1})/log q_n ≤ κ_n ≤ log(q_n q_{n+2})/log q_n.
    pub kappa_bracket_ok: Vec<bool>,
    /// Max and min of κ over the last [`KAPPA_WINDOW`] indices.
    pub mu_est: f64,
    pub nu_est: f64,
    /// First 1-based index n ≤ depth + 1 with a_n at the bit cap.
    pub saturated_at: Option<usize>,
    pub verdict: SquareBrjunoVerdict,
}

impl BrjunoReport {
    pub fn square_sum(&self) -> f64 {
        *self.brjuno_sums[&2].last().unwrap()
    }

    pub fn last_increment(&self) -> f64 {
        *self.increments.last().unwrap()
    }

    pub fn brackets_hold(&self) -> bool {
        self.bracket_ok.iter().all(|&(a, b)| a && b) && self.kappa_bracket_ok.iter().all(|&b| b)
    }
}

fn leq(a: f64, b: f64) -> bool {
    a <= b + BRACKET_SLACK * b.abs().max(a.abs()) + 1e-300
}

/// Build the report from the first `depth + 4` quotients of x.
pub fn brjuno_report(x: &RealSpec, depth: usize) -> Result<BrjunoReport> {
    let list = quotient_list(x)?;
    if list.len() < depth + 4 {
        return Err(Error::Depth(format!(
            "{} quotients available, the report to depth {depth} needs {}",
            list.len(),
            depth + 4
        )));
    }
    let lo = LogOrbit::new(&list);
    let cap = mem_cap_bits();
    let lq = |n: usize| lo.ln_q[n];

    let mut brjuno_sums = BTreeMap::new();
    for &k in &BRJUNO_EXPONENTS {
        let mut acc = 0.0;
        let sums: Vec<f64> = (0..=depth)
            .map(|n| {
                acc += log_over_power(lq(n + 1), lq(n), k as f64);
                acc
            })
            .collect();
        brjuno_sums.insert(k, sums);
    }
    let increments: Vec<f64> = (0..=depth).map(|n| log_over_power(lq(n + 1), lq(n), 2.0)).collect();

    let ln2 = std::f64::consts::LN_2;
    let mut beta_gamma_sum = Vec::with_capacity(depth + 1);
    let mut bracket_ok = Vec::with_capacity(depth + 1);
    let (mut bg, mut upper, mut sq, mut lower_extra) = (0.0, 0.0, 0.0, 0.0);
    for n in 0..=depth {
        // β_{n−1}γ_n = β_{n−1}² ln(1/T^n)
        bg += (2.0 * lo.ln_beta(n as i64 - 1) + lo.ln_inv_t[n].ln()).exp();
        upper += log_over_power(ln2 + lq(n + 1), lq(n), 2.0);
        sq += increments[n];
        lower_extra += log_over_power(ln2 + lq(n), lq(n), 2.0);
        beta_gamma_sum.push(bg);
        bracket_ok.push((leq(bg, upper), leq(sq, 2.0 * bg + lower_extra)));
    }

    let star_sequence: Vec<f64> = (0..=depth).map(|n| log_over_power(lq(n + 4), lq(n), 2.0)).collect();
    let starstar_sequence: Vec<f64> = (0..=depth).map(|n| log_over_power(lq(n + 3), lq(n), 2.0)).collect();
    let window = depth / 2..=depth;
    let late_max = |s: &[f64]| window.clone().map(|n| s[n]).fold(0.0, f64::max);
    let star_ok = late_max(&star_sequence) < STAR_TOLERANCE;
    let ones_late = window.clone().any(|n| n >= 1 && list[n - 1].is_one());
    let starstar_ok = late_max(&starstar_sequence) < STAR_TOLERANCE && !ones_late;

    let mut kappa = Vec::with_capacity(depth + 1);
    let mut kappa_bracket_ok = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let l = lq(n);
        if l <= 0.0 {
            kappa.push(None);
            kappa_bracket_ok.push(true);
            continue;
        }
        // |x − p_n/q_n| = β_n/q_n
        let k = (l - lo.ln_beta(n as i64)) / l;
        let lower = (l + lq(n + 1)) / l;
        let upper = (l + lq(n + 2)) / l;
        kappa.push(Some(k));
        kappa_bracket_ok.push(leq(lower, k) && leq(k, upper));
    }
    let mut kappa_tail_sup = vec![None; depth + 1];
    let mut run: Option<f64> = None;
    for n in (0..=depth).rev() {
        if let Some(k) = kappa[n] {
            run = Some(run.map_or(k, |r: f64| r.max(k)));
        }
        kappa_tail_sup[n] = run;
    }
    let tail: Vec<f64> = kappa.iter().rev().flatten().take(KAPPA_WINDOW).copied().collect();
    let mu_est = tail.iter().copied().fold(f64::NAN, f64::max);
    let nu_est = tail.iter().copied().fold(f64::NAN, f64::min);

    let saturated_at = lo.max_bits[..=depth].iter().position(|&b| b > cap).map(|i| i + 1);
    let sum = *brjuno_sums[&2].last().unwrap();
    let verdict = if saturated_at.is_some() {
        SquareBrjunoVerdict::Saturated
    } else if divergence_witness(sum, &increments) {
        SquareBrjunoVerdict::DivergentAtDepth
    } else if increments[depth] < CONVERGED_INCREMENT {
        SquareBrjunoVerdict::ConvergentAtDepth
    } else {
        SquareBrjunoVerdict::Undecided
    };

    Ok(BrjunoReport {
        depth,
        brjuno_sums,
        increments,
        beta_gamma_sum,
        bracket_ok,
        star_sequence,
        starstar_sequence,
        star_ok,
        starstar_ok,
        kappa,
        kappa_tail_sup,
        kappa_bracket_ok,
        mu_est,
        nu_est,
        saturated_at,
        verdict,
    })
}

fn divergence_witness(sum: f64, inc: &[f64]) -> bool {
    if sum <= DIVERGENCE_THRESHOLD || inc.len() < 3 {
        return false;
    }
    let l = &inc[inc.len() - 3..];
    l[0] > 0.0 && l[1] > l[0] && l[2] > l[1]
}

// ---------------------------------------------------------------------------
// Extreme numbers

/// Shapes of quotient lists with known Diophantine behaviour.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtremeKind {
    /// All quotients 1.
    Golden,
    /// The given block repeated.
    Periodic(Vec<u64>),
    /// a_{n+1} = max(2, ⌈exp(q_n^rate)⌉).
    Liouville(f64),
    /// Blocks of four: a_{n+1} = q_n, 1, 1, then ⌈exp(q_n²)⌉.
    StarViolator,
}

impl FromStr for ExtremeKind {
    type Err = Error;

    /// `golden`, `periodic:2,3`, `liouville:2`, `star_violator`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown extreme kind {s:?}"));
        if s == "golden" {
            Ok(ExtremeKind::Golden)
        } else if s == "star_violator" {
            Ok(ExtremeKind::StarViolator)
        } else if let Some(r) = s.strip_prefix("periodic:") {
            let block = r
                .split(',')
                .map(|t| t.trim().parse::<u64>().ok().filter(|&v| v >= 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            if block.is_empty() {
                return Err(bad());
            }
            Ok(ExtremeKind::Periodic(block))
        } else if let Some(r) = s.strip_prefix("liouville:") {
            r.trim().parse::<f64>().map(ExtremeKind::Liouville).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

/// A constructed quotient list and where the bit cap cut it.
#[derive(Clone, Debug)]
pub struct ExtremeNumber {
    pub spec: RealSpec,
    /// 1-based indices of quotients replaced by 2^cap.
    pub saturated: Vec<usize>,
    pub cap_bits: u64,
}

impl ExtremeNumber {
    pub fn quotients(&self) -> &[BigUint] {
        match &self.spec {
            RealSpec::Quotients(a) => a,
            _ => unreachable!(),
        }
    }
}

/// ⌈e^v⌉ to 53 significant bits, or None if it needs more than `cap` bits.
fn ceil_exp(v: f64, cap: u64) -> Option<BigUint> {
    let log2 = v / std::f64::consts::LN_2;
    if !(log2 < cap as f64) {
        return None;
    }
    if v < 36.0 {
        return Some(BigUint::from(v.exp().ceil() as u64));
    }
    let e = log2.floor();
    let m = (2f64.powf(log2 - e) * 2f64.powi(52)).ceil() as u64;
    let shift = e as u64 - 52;
    Some((BigUint::from(m) << shift) + 1u32)
}

/// Quotient list of the requested kind and length. Quotients that would
/// exceed the bit cap are replaced by 2^cap and flagged.
pub fn construct_extreme_number(kind: &ExtremeKind, depth: usize) -> Result<ExtremeNumber> {
    if depth < 1 {
        return domain("depth must be at least 1");
    }
    let cap = mem_cap_bits();
    let saturate = || BigUint::one() << cap;
    let mut saturated = Vec::new();
    let list: Vec<BigUint> = match kind {
        ExtremeKind::Golden => vec![BigUint::one(); depth],
        ExtremeKind::Periodic(block) => {
            if block.is_empty() || block.contains(&0) {
                return domain("periodic block must be non-empty with entries ≥ 1");
            }
            (0..depth).map(|i| BigUint::from(block[i % block.len()])).collect()
        }
        ExtremeKind::Liouville(rate) => {
            if !(*rate >= 1.0) {
                return domain(format!("rate {rate} must be at least 1"));
            }
            let mut out = Vec::with_capacity(depth);
            let (mut ln_q, mut r) = (0.0f64, 0.0f64);
            for n in 0..depth {
                let a = match ceil_exp((rate * ln_q).exp(), cap) {
                    Some(a) => a.max(BigUint::from(2u32)),
                    None => {
                        saturated.push(n + 1);
                        saturate()
                    }
                };
                ln_q += ln_sum_big(&a, r);
                r = 1.0 / (a.to_f64().unwrap_or(f64::INFINITY) + r);
                out.push(a);
            }
            out
        }
        ExtremeKind::StarViolator => {
            let mut out: Vec<BigUint> = Vec::with_capacity(depth);
            let (mut q0, mut q1) = (BigUint::zero(), BigUint::one());
            let mut block_q = BigUint::one();
            for n in 0..depth {
                let a = match n % 4 {
                    0 => {
                        block_q = q1.clone();
                        if block_q.bits() > cap {
                            saturated.push(n + 1);
                            saturate()
                        } else {
                            block_q.clone()
                        }
                    }
                    3 => match ceil_exp((2.0 * ln_big(&block_q)).exp(), cap) {
                        Some(a) => a,
                        None => {
                            saturated.push(n + 1);
                            saturate()
                        }
                    },
                    _ => BigUint::one(),
                };
                let q2 = &a * &q1 + &q0;
                q0 = std::mem::replace(&mut q1, q2);
                out.push(a);
            }
            out
        }
    };
    Ok(ExtremeNumber { spec: RealSpec::Quotients(list), saturated, cap_bits: cap })
}

// ---------------------------------------------------------------------------
// Divergence scan

/// Smallest h for which a difference quotient is attempted.
pub const SCAN_MIN_H: f64 = 1e-11;

/// Tolerance of each F₂ evaluation in the scan.
pub const SCAN_EPS: f64 = 1e-13;

/// One row of [`divergence_scan`].
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub n: usize,
    /// h_n as f64 (0 when it underflows).
    pub h: f64,
    pub ln_h: f64,
    /// 1/(18 q_{n+1}²) < h_n, checked exactly.
    pub lower_ok: bool,
    /// h_n ≤ 1/(q_n q_{n+1}), checked exactly.
    pub upper_ok: bool,
    /// x + h_n lies in the basic interval with quotients a_1..a_n, a_{n+1}+2.
    pub membership_ok: bool,
    /// [x, x + h_n] contains the basic interval with quotients a_1..a_n, a_{n+1}+1.
    pub contains_next: bool,
    /// (F₂(x + h_n) − F₂(x))/h_n when h_n is resolvable in binary64.
    pub dq: Option<f64>,
    pub dq_error: f64,
    pub note: String,
}

impl ScanRow {
    pub fn bracket_ok(&self) -> bool {
        self.lower_ok && self.upper_ok && self.membership_ok && self.contains_next
    }
}

fn continuants(list: &[BigUint], upto: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    // p_{−1}, p_0, … and q_{−1}, q_0, …, stored at index k + 1
    let mut p = vec![BigInt::one(), BigInt::zero()];
    let mut q = vec![BigInt::zero(), BigInt::one()];
    for a in &list[..upto] {
        let a = BigInt::from(a.clone());
        let k = p.len();
        p.push(&a * &p[k - 1] + &p[k - 2]);
        q.push(&a * &q[k - 1] + &q[k - 2]);
    }
    (p, q)
}

/// Open basic interval for the given leading quotients, increasing order.
fn basic_interval(prefix: &[BigUint]) -> (BigRational, BigRational) {
    let (p, q) = continuants(prefix, prefix.len());
    let m = p.len() - 1;
    let e1 = BigRational::new_raw(p[m].clone(), q[m].clone());
    let e2 = BigRational::new_raw(&p[m] + &p[m - 1], &q[m] + &q[m - 1]);
    if cmp_rational(&e1, &e2).is_lt() {
        (e1, e2)
    } else {
        (e2, e1)
    }
}

/// Difference quotients of F₂ at x along h_n → 0 for odd n, with
/// x + h_n = [0; a_1, …, a_n, a_{n+1} + 2, 2].
pub fn divergence_scan(x: &RealSpec, n_list: &[usize]) -> Result<Vec<ScanRow>> {
    let list = quotient_list(x)?;
    for &n in n_list {
        if n % 2 == 0 {
            return domain(format!("n = {n} must be odd"));
        }
        if n + 2 > list.len() {
            return Err(Error::Depth(format!(
                "n = {n} needs {} quotients, {} available",
                n + 2,
                list.len()
            )));
        }
    }
    let xv = RealNumber::from_quotients(list.clone()).value().clone();
    let (_, q) = continuants(&list, n_list.iter().max().map_or(0, |&n| n + 1));
    let mut fx = None;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mut ylist = list[..=n].to_vec();
        ylist[n] += 2u32;
        let mut next = ylist.clone();
        ylist.push(BigUint::from(2u32));
        next[n] -= 1u32;
        let yv = RealNumber::from_quotients(ylist.clone()).value().clone();
        let h = sub_lazy(&yv, &xv);
        let (qn, qn1) = (&q[n + 1], &q[n + 2]);
        // integer cross multiplication; Ratio's own ops reduce by gcd
        let lower_ok = h.numer() * (BigInt::from(18) * qn1 * qn1) > *h.denom();
        let upper_ok = h.numer() * (qn * qn1) <= *h.denom();
        let (mlo, mhi) = basic_interval(&ylist[..=n]);
        let membership_ok = cmp_rational(&mlo, &yv).is_lt() && cmp_rational(&yv, &mhi).is_lt();
        let (nlo, nhi) = basic_interval(&next);
        let contains_next = h.is_positive() && !cmp_rational(&nlo, &xv).is_lt() && !cmp_rational(&yv, &nhi).is_lt();
        let ln_h = if h.is_positive() { ln_ratio(h.numer(), h.denom()) } else { f64::NEG_INFINITY };
        let hf = if ln_h > -700.0 { ln_h.exp() } else { 0.0 };
        let (dq, dq_error, note) = if hf >= SCAN_MIN_H {
            if fx.is_none() {
                fx = Some(eval_series(Abscissa::from_rational(&xv), 2, SCAN_EPS, Method::Hyperbola)?.0);
            }
            let f0 = fx.unwrap();
            let x_abs = Abscissa::from_rational(&xv);
            let f1 = eval_series(Abscissa::from_rational(&yv), 2, SCAN_EPS, Method::Hyperbola)?.0;
            let err = (f0.error_bound + f1.error_bound + x_abs.representation_error() * 10.0) / hf;
            (Some((f1.value - f0.value) / hf), err, String::new())
        } else {
            (None, f64::INFINITY, format!("h_n = e^{ln_h:.4e} is below binary64 resolution"))
        };
        rows.push(ScanRow { n, h: hf, ln_h, lower_ok, upper_ok, membership_ok, contains_next, dq, dq_error, note });
    }
    Ok(rows)
}
