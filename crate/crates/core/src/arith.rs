//! Integer and constant substrate: divisor sums σ_w(n) = Σ_{d|n} d^w,
//! exact Bernoulli numbers, and ζ values with Euler–Maclaurin remainders.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Default memory cap for a [`DivisorTable`], in bytes.
pub const DEFAULT_TABLE_BYTE_CAP: usize = 1 << 31;

#[derive(Debug, Clone)]
enum Store {
    Small(Vec<u64>),
    Wide(Vec<u128>),
    Big(Vec<BigUint>),
}

/// `values[n] = σ_w(n)` for `1 ≤ n ≤ limit`, immutable once built.
///
/// Storage width is picked from an a-priori bound on σ_w(limit), so the
/// common σ₁ tables stay at eight bytes per entry.
#[derive(Debug, Clone)]
pub struct DivisorTable {
    weight_exponent: u32,
    limit: usize,
    store: Store,
}

impl DivisorTable {
    pub fn weight_exponent(&self) -> u32 {
        self.weight_exponent
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// σ_w(n). Panics when `n` is 0 or above the limit.
    pub fn get(&self, n: usize) -> BigUint {
        assert!(n >= 1 && n <= self.limit, "index {n} outside 1..={}", self.limit);
        match &self.store {
            Store::Small(v) => BigUint::from(v[n]),
            Store::Wide(v) => BigUint::from(v[n]),
            Store::Big(v) => v[n].clone(),
        }
    }

    pub fn get_f64(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.limit, "index {n} outside 1..={}", self.limit);
        match &self.store {
            Store::Small(v) => v[n] as f64,
            Store::Wide(v) => v[n] as f64,
            Store::Big(v) => v[n].to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// The table as `f64`, index 0 holding 0.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.limit + 1];
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = self.get_f64(n);
        }
        out
    }
}

fn log2_sigma_bound(w: u32, limit: usize) -> f64 {
    // σ_w(n) ≤ n^w (1 + ln n)
    let n = limit.max(2) as f64;
    w as f64 * n.log2() + (1.0 + n.ln()).log2()
}

/// Sieve σ_w(n) for n ≤ limit under the default memory cap.
pub fn build_divisor_table(weight_exponent: u32, limit: usize) -> Result<DivisorTable> {
    build_divisor_table_capped(weight_exponent, limit, DEFAULT_TABLE_BYTE_CAP)
}

/// Divisor-accumulation sieve, O(N log N) additions.
pub fn build_divisor_table_capped(
    weight_exponent: u32,
    limit: usize,
    byte_cap: usize,
) -> Result<DivisorTable> {
    if limit == 0 {
        return domain("divisor table limit must be at least 1");
    }
    let bits = log2_sigma_bound(weight_exponent, limit);
    let width = if bits < 63.0 {
        8
    } else if bits < 127.0 {
        16
    } else {
        // rough: BigUint header plus limbs
        24 + 8 * ((bits / 64.0).ceil() as usize)
    };
    let bytes = (limit + 1).saturating_mul(width);
    if bytes > byte_cap {
        return Err(Error::Resource(format!(
            "divisor table of {limit} entries needs ~{bytes} bytes, cap is {byte_cap}"
        )));
    }
    let w = weight_exponent;
    let store = if width == 8 {
        let mut v = vec![0u64; limit + 1];
        for d in 1..=limit {
            let dw = (d as u64).pow(w);
            for m in (d..=limit).step_by(d) {
                v[m] += dw;
            }
        }
        Store::Small(v)
    } else if width == 16 {
        let mut v = vec![0u128; limit + 1];
        for d in 1..=limit {
            let dw = (d as u128).pow(w);
            for m in (d..=limit).step_by(d) {
                v[m] += dw;
            }
        }
        Store::Wide(v)
    } else {
        let mut v = vec![BigUint::zero(); limit + 1];
        for d in 1..=limit {
            let dw = BigUint::from(d).pow(w);
            for m in (d..=limit).step_by(d) {
                v[m] += &dw;
            }
        }
        Store::Big(v)
    };
    Ok(DivisorTable {
        weight_exponent,
        limit,
        store,
    })
}

/// σ_w(n) for a single n, by trial-division factorization.
pub fn sigma(weight_exponent: u32, n: u64) -> Result<BigUint> {
    if n == 0 {
        return domain("σ(0) is undefined");
    }
    let mut out = BigUint::one();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            let pw = BigUint::from(p).pow(weight_exponent);
            let mut term = BigUint::one();
            let mut acc = BigUint::one();
            while m % p == 0 {
                m /= p;
                acc *= &pw;
                term += &acc;
            }
            out *= term;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out *= BigUint::one() + BigUint::from(m).pow(weight_exponent);
    }
    Ok(out)
}

/// Streams σ_w(n) as `f64` over consecutive blocks, using O(block + √N)
/// memory. Each n is accumulated exactly in `u128` from its divisor pairs
/// (d, n/d) with d ≤ √n before conversion.
pub struct SegmentedSigma {
    w: u32,
    next: u64,
    block: usize,
    acc: Vec<u128>,
}

impl SegmentedSigma {
    pub fn new(weight_exponent: u32, start: u64, block: usize) -> Self {
        assert!(start >= 1);
        assert!(weight_exponent <= 4, "u128 accumulation supports w ≤ 4");
        Self {
            w: weight_exponent,
            next: start,
            block: block.max(1024),
            acc: Vec::new(),
        }
    }

    /// Fill `out` with σ_w(n) for n in `[lo, lo + out.len())` and advance.
    /// Returns `lo`.
    pub fn next_block(&mut self, out: &mut Vec<f64>) -> u64 {
        let lo = self.next;
        let hi = lo + self.block as u64;
        self.acc.clear();
        self.acc.resize(self.block, 0);
        let w = self.w;
        let mut d = 1u64;
        while d * d < hi {
            let first = {
                let sq = d * d;
                let m = lo.div_ceil(d) * d;
                m.max(sq)
            };
            let dw = (d as u128).pow(w);
            let mut m = first;
            let mut q = m / d;
            while m < hi {
                let qw = if q == d { 0 } else { (q as u128).pow(w) };
                self.acc[(m - lo) as usize] += dw + qw;
                m += d;
                q += 1;
            }
            d += 1;
        }
        out.clear();
        out.extend(self.acc.iter().map(|&v| v as f64));
        self.next = hi;
        lo
    }
}

/// Exact Bernoulli number B_k (B₁ = −1/2 convention) for even k ≥ 0.
pub fn bernoulli(k: i64) -> Result<BigRational> {
    if k < 0 || k % 2 != 0 {
        return domain(format!("bernoulli({k}): k must be even and non-negative"));
    }
    Ok(bernoulli_table(k as usize).swap_remove(k as usize))
}

/// B_0..=B_n via Σ_{j≤m} C(m+1, j) B_j = 0.
pub fn bernoulli_table(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, j)
        for (j, bj) in b.iter().enumerate() {
            s += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// B_{2j}/(2j)! for j = 1..=30 as `f64`.
fn em_coefficients() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        let b = bernoulli_table(60);
        let mut fact = BigInt::one();
        let mut out = Vec::new();
        for m in 1..=60usize {
            fact *= BigInt::from(m);
            if m % 2 == 0 {
                let v = &b[m] / BigRational::from_integer(fact.clone());
                out.push(v.to_f64().unwrap());
            }
        }
        out
    })
}

/// ζ(s) for integer s ≥ 2 with a remainder bound, by Euler–Maclaurin.
pub fn zeta(s: u32) -> Result<(f64, f64)> {
    if s < 2 {
        return domain(format!("ζ({s}) diverges or is not supported"));
    }
    let sf = s as f64;
    let n = 20 + s as usize;
    let nf = n as f64;
    let mut sum = 0.0;
    for j in (1..n).rev() {
        sum += (j as f64).powf(-sf);
    }
    sum += nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf);
    let c = em_coefficients();
    let terms = 12;
    // rising factorial s(s+1)…(s+2j−2) times N^{−s−2j+1}
    let mut rising = sf;
    let mut pw = nf.powf(-sf - 1.0);
    for (j, cj) in c.iter().enumerate().take(terms) {
        if j > 0 {
            rising *= (sf + 2.0 * j as f64 - 1.0) * (sf + 2.0 * j as f64);
            pw /= nf * nf;
        }
        sum += cj * rising * pw;
    }
    // the remainder is dominated by the first omitted term for real s > 1
    let j = terms;
    let omitted =
        (c[j] * rising * (sf + 2.0 * j as f64 - 1.0) * (sf + 2.0 * j as f64) * pw / (nf * nf)).abs();
    // one half-ulp of the running sum per addition
    let rounding = 0.5 * (n + terms + 2) as f64 * f64::EPSILON * sum;
    Ok((sum, omitted + rounding))
}

/// ζ(2)ζ(k+1), the value G_k(0).
pub fn zeta_product_constant(k: i64) -> Result<f64> {
    if k < 2 || k % 2 != 0 {
        return domain(format!("zeta_product_constant({k}): k must be even ≥ 2"));
    }
    let (z, _) = zeta(k as u32 + 1)?;
    Ok(PI * PI / 6.0 * z)
}

/// Hurwitz ζ(s, a) = Σ_{n≥0} (n + a)^{−s} for real s > 1, a > 0.
///
/// Shifts to A ≥ s + 20 and applies twelve Euler–Maclaurin corrections;
/// relative error is at the level of a few ulp.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    debug_assert!(s > 1.0 && a > 0.0);
    let shift = ((s + 20.0 - a).max(0.0)).ceil() as usize;
    let big_a = a + shift as f64;
    let c = em_coefficients();
    let mut tail = big_a.powf(1.0 - s) / (s - 1.0) + 0.5 * big_a.powf(-s);
    let mut rising = s;
    let mut pw = big_a.powf(-s - 1.0);
    for (j, cj) in c.iter().enumerate().take(12) {
        if j > 0 {
            rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
            pw /= big_a * big_a;
        }
        tail += cj * rising * pw;
    }
    let mut head = 0.0;
    for n in (0..shift).rev() {
        head += (a + n as f64).powf(-s);
    }
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn brute_sigma(w: u32, n: u64) -> u128 {
        (1..=n).filter(|d| n % d == 0).map(|d| (d as u128).pow(w)).sum()
    }

    #[test]
    fn table_examples() {
        let t = build_divisor_table(1, 1).unwrap();
        assert_eq!(t.get(1), BigUint::from(1u32));
        let t = build_divisor_table(1, 6).unwrap();
        assert_eq!(t.get(6), BigUint::from(12u32));
        let t = build_divisor_table(3, 2).unwrap();
        assert_eq!(t.get(2), BigUint::from(9u32));
    }

    #[test]
    fn zero_limit_and_cap_are_errors() {
        assert!(matches!(build_divisor_table(1, 0), Err(Error::Domain(_))));
        assert!(matches!(
            build_divisor_table_capped(1, 1000, 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn sieve_matches_enumeration() {
        for w in [1u32, 3, 5] {
            let t = build_divisor_table(w, 10_000).unwrap();
            for n in 1..=10_000u64 {
                assert_eq!(t.get(n as usize), BigUint::from(brute_sigma(w, n)), "w={w} n={n}");
            }
        }
    }

    #[test]
    fn wide_and_big_storage() {
        let t = build_divisor_table(9, 2000).unwrap();
        assert!(matches!(t.store, Store::Wide(_)));
        assert_eq!(t.get(12), sigma(9, 12).unwrap());
        let t = build_divisor_table(13, 2000).unwrap();
        assert!(matches!(t.store, Store::Big(_)));
        assert_eq!(t.get(1999), BigUint::from(1u32) + BigUint::from(1999u32).pow(13));
        assert_eq!(t.get(1800), sigma(13, 1800).unwrap());
    }

    #[test]
    fn prime_and_multiplicative_invariants() {
        let t = build_divisor_table(3, 5000).unwrap();
        for p in [2u64, 3, 5, 7, 4999] {
            assert_eq!(t.get(p as usize), BigUint::from(1 + (p as u128).pow(3)));
        }
        for (m, n) in [(4usize, 9usize), (8, 125), (7, 11), (16, 81)] {
            assert_eq!(t.get(m * n), t.get(m) * t.get(n));
        }
    }

    #[test]
    fn sigma1_partial_sum_bound() {
        let t = build_divisor_table(1, 1_000_000).unwrap();
        let mut s = 0.0f64;
        for n in 1..=1_000_000usize {
            s += t.get_f64(n);
            if n % 1000 == 0 || n < 100 {
                let nf = n as f64;
                let bound = PI * PI * nf * nf / 12.0 + 2.0 * nf * nf.ln().max(1.0);
                assert!(s <= bound, "n={n}: {s} > {bound}");
            }
        }
    }

    #[test]
    fn factorization_matches_sieve_above_table() {
        for n in [1u64, 97, 360, 1 << 20, 999_983 * 3, 600_851_475_143] {
            let direct = if n < 100_000 {
                Some(brute_sigma(1, n))
            } else {
                None
            };
            let f = sigma(1, n).unwrap();
            if let Some(d) = direct {
                assert_eq!(f, BigUint::from(d));
            }
        }
        // 600851475143 = 71·839·1471·6857
        let expect: u64 = [71u64, 839, 1471, 6857].iter().map(|p| p + 1).product();
        assert_eq!(sigma(1, 600_851_475_143).unwrap(), BigUint::from(expect));
    }

    #[test]
    fn segmented_matches_table() {
        let t = build_divisor_table(3, 50_000).unwrap();
        let mut seg = SegmentedSigma::new(3, 1, 4096);
        let mut buf = Vec::new();
        let mut done = 0usize;
        while done < 50_000 {
            let lo = seg.next_block(&mut buf) as usize;
            for (i, v) in buf.iter().enumerate() {
                let n = lo + i;
                if n <= 50_000 {
                    assert_eq!(*v, t.get_f64(n));
                }
            }
            done = lo + buf.len() - 1;
        }
    }

    #[test]
    fn bernoulli_values() {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(bernoulli(0).unwrap(), q(1, 1));
        assert_eq!(bernoulli(2).unwrap(), q(1, 6));
        assert_eq!(bernoulli(4).unwrap(), q(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), q(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(-2).is_err());
        // the Eisenstein normalisation −2k/B_k
        for (k, want) in [(2i64, -24i64), (4, 240), (6, -504)] {
            let f = -BigRational::from_i64(2 * k).unwrap() / bernoulli(k).unwrap();
            assert_eq!(f, q(want, 1));
        }
    }

    #[test]
    fn zeta_against_frozen_digits() {
        let (z3, b3) = zeta(3).unwrap();
        assert!((z3 - 1.202_056_903_159_594_3).abs() < 1e-15);
        assert!(b3 < 1e-14);
        let (z2, _) = zeta(2).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() < 1e-15);
        let (z4, _) = zeta(4).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta_product_constant(2).unwrap() - 1.977_304_350_297_296_1).abs() < 1e-14);
        // ζ(2)ζ(5), ζ(5) = 1.0369277551433699263
        let want = PI * PI / 6.0 * 1.036_927_755_143_37;
        assert!((zeta_product_constant(4).unwrap() - want).abs() < 1e-14);
        assert!(zeta_product_constant(3).is_err());
    }

    #[test]
    fn hurwitz_reduces_to_riemann_and_shifts() {
        let (z3, _) = zeta(3).unwrap();
        assert!((hurwitz_zeta(3.0, 1.0) - z3).abs() < 1e-15);
        for (s, a) in [(4.0, 0.3), (9.5, 0.05), (17.0, 2.7)] {
            let lhs = hurwitz_zeta(s, a);
            let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0);
            assert!(((lhs - rhs) / lhs).abs() < 1e-14, "s={s} a={a}");
        }
        // ζ(2, 1/2) = 3ζ(2)
        assert!((hurwitz_zeta(2.0, 0.5) - PI * PI / 2.0).abs() < 1e-14);
    }
}
