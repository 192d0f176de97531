//! Clausen-type sums on the unit circle.
//!
//! Cl₂(θ) = Σ sin(dθ)/d², Cl₃(θ) = Σ cos(dθ)/d³ and the cubic sine sum
//! Σ sin(dθ)/d³, all on the reduced angle |θ| ≤ π.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::arith::zeta;

/// max |Cl₂| = Cl₂(π/3).
pub const CL2_MAX: f64 = 1.014_941_606_409_653_6;

const TERMS: usize = 26;

/// c_j = 2ζ(2j)/(2j(2j+1)), so that Cl₂(θ) = θ − θ ln|θ| + θ Σ c_j (θ/2π)^{2j}.
fn coefficients() -> &'static [f64; TERMS] {
    static C: OnceLock<[f64; TERMS]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; TERMS];
        for (j, slot) in c.iter_mut().enumerate() {
            let m = 2 * (j + 1);
            let (z, _) = zeta(m as u32).expect("even zeta");
            *slot = 2.0 * z / (m as f64 * (m + 1) as f64);
        }
        c
    })
}

/// θ reduced to (−π, π].
pub fn reduce_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta - two_pi * (theta / two_pi).round();
    if t <= -PI {
        t += two_pi;
    }
    t
}

/// Cl₂ on an already reduced angle |θ| ≤ π.
pub fn cl2_reduced(theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let c = coefficients();
    let u = (theta / (2.0 * PI)).powi(2);
    let mut s = 0.0;
    for cj in c.iter().rev() {
        s = s * u + cj;
    }
    s *= u;
    theta * (1.0 - theta.abs().ln() + s)
}

pub fn cl2(theta: f64) -> f64 {
    cl2_reduced(reduce_angle(theta))
}

/// Cl₂(2π f) for a centred fraction f ∈ (−1/2, 1/2].
pub fn cl2_frac(f: f64) -> f64 {
    cl2_reduced(2.0 * PI * f)
}

/// The analytic part R(θ) = Cl₂(θ) − (θ − θ ln|θ|), valid for |θ| < 2π.
pub fn cl2_regular_part(theta: f64) -> f64 {
    let c = coefficients();
    let u = (theta / (2.0 * PI)).powi(2);
    let mut s = 0.0;
    for cj in c.iter().rev() {
        s = s * u + cj;
    }
    theta * s * u
}

/// Cl₃(θ) = ζ(3) − 3θ²/4 + (θ²/2) ln|θ| − θ² Σ c_j (θ/2π)^{2j}/(2j+2).
pub fn cl3_reduced(theta: f64) -> f64 {
    static Z3: OnceLock<f64> = OnceLock::new();
    let z3 = *Z3.get_or_init(|| zeta(3).unwrap().0);
    if theta == 0.0 {
        return z3;
    }
    let c = coefficients();
    let u = (theta / (2.0 * PI)).powi(2);
    let mut s = 0.0;
    for (j, cj) in c.iter().enumerate().rev() {
        s = s * u + cj / (2.0 * (j + 1) as f64 + 2.0);
    }
    s *= u;
    let t2 = theta * theta;
    z3 - 0.75 * t2 + 0.5 * t2 * theta.abs().ln() - t2 * s
}

/// Σ sin(2π d f)/d³ = (2π³/3) B₃({f}) for a fraction f.
pub fn sin3_frac(f: f64) -> f64 {
    let t = f - f.floor();
    let b3 = t * (t - 0.5) * (t - 1.0);
    2.0 * PI.powi(3) / 3.0 * b3
}

/// B₂({t}) for a centred fraction f: f² − |f| + 1/6.
pub fn b2_frac(f: f64) -> f64 {
    f * f - f.abs() + 1.0 / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_sin2(theta: f64, terms: usize) -> f64 {
        // pairwise from the small end
        let mut s = 0.0;
        for d in (1..=terms).rev() {
            let df = d as f64;
            s += (df * theta).sin() / (df * df);
        }
        s
    }

    #[test]
    fn cl2_matches_ten_million_term_sums() {
        // the direct tail after M terms is O(1/(M² |sin θ/2|)), well below 1e-13
        let angles = [0.5, 0.8, 1.0, PI / 3.0, 1.5, 2.0, 2.5, 3.0, -0.7, 5.5];
        for &t in &angles {
            let direct = direct_sin2(t, 10_000_000);
            assert!((cl2(t) - direct).abs() < 1e-13, "θ={t}: {} vs {direct}", cl2(t));
        }
    }

    #[test]
    fn cl2_special_values() {
        assert!((cl2(PI / 3.0) - CL2_MAX).abs() < 1e-15);
        assert!(cl2(PI).abs() < 1e-15);
        // Cl₂(π/2) is Catalan's constant
        assert!((cl2(PI / 2.0) - 0.915_965_594_177_219_0).abs() < 1e-15);
        assert!((cl2(-1.2) + cl2(1.2)).abs() < 1e-16);
        assert!((cl2(1.2 + 2.0 * PI) - cl2(1.2)).abs() < 1e-14);
    }

    #[test]
    fn cl3_and_sine_cube() {
        for &t in &[0.05, 0.9, 2.0, 3.1] {
            let mut c = 0.0;
            let mut s = 0.0;
            for d in (1..=200_000).rev() {
                let df = d as f64;
                c += (df * t).cos() / df.powi(3);
                s += (df * t).sin() / df.powi(3);
            }
            assert!((cl3_reduced(t) - c).abs() < 1e-12, "θ={t}");
            assert!((sin3_frac(t / (2.0 * PI)) - s).abs() < 1e-12, "θ={t}");
        }
    }

    #[test]
    fn b2_matches_cosine_sum() {
        // Σ cos(2π d t)/d² = π² B₂({t})
        for &f in &[0.0, 0.1, -0.3, 0.5] {
            let mut s = 0.0;
            for d in (1..=2_000_000).rev() {
                let df = d as f64;
                s += (2.0 * PI * df * f).cos() / (df * df);
            }
            assert!((PI * PI * b2_frac(f) - s).abs() < 1e-6);
        }
    }
}
