use fseries::analytic::series::rational_abscissa;
use fseries::analytic::{eval_series, Method};
use fseries::arith::sigma;
use fseries::brjuno::brjuno_report;
use fseries::contfrac::{expand_cf, orbit_identity_failures, RealSpec};
use fseries::funceq::eval_f2g2_cf;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn coprime_pair(max_q: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_q).prop_flat_map(|q| (1..q, Just(q))).prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_is_multiplicative(m in 1u64..2000, n in 1u64..2000, k in 0u32..4) {
        prop_assume!(m.gcd(&n) == 1);
        prop_assert_eq!(sigma(k, m * n).unwrap(), sigma(k, m).unwrap() * sigma(k, n).unwrap());
    }

    #[test]
    fn orbit_identities_hold((p, q) in coprime_pair(100_000)) {
        let o = expand_cf(&BigRational::new(p.into(), q.into()), 200).unwrap();
        prop_assert!(o.terminated());
        let bad = orbit_identity_failures(&o);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn report_brackets_hold(list in prop::collection::vec(1u64..60, 24..40)) {
        let depth = list.len() - 4;
        let spec = RealSpec::Quotients(list.into_iter().map(BigUint::from).collect());
        let r = brjuno_report(&spec, depth).unwrap();
        prop_assert!(r.brackets_hold());
        prop_assert!(r.kappa_bracket_ok.iter().all(|&b| b));
        // square-Brjuno partial sums are nondecreasing
        let s = &r.brjuno_sums[&2];
        prop_assert!(s.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(r.square_sum(), *s.last().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn parity_and_reflection((p, q) in coprime_pair(500)) {
        let (f, g) = eval_series(rational_abscissa(p, q as u64), 2, 1e-10, Method::Hyperbola).unwrap();
        let (fr, gr) = eval_series(rational_abscissa(q - p, q as u64), 2, 1e-10, Method::Hyperbola).unwrap();
        prop_assert!((f.value + fr.value).abs() <= f.error_bound + fr.error_bound);
        prop_assert!((g.value - gr.value).abs() <= g.error_bound + gr.error_bound);
    }

    #[test]
    fn gauss_map_route_matches_direct_sum((p, q) in coprime_pair(3000)) {
        let spec = RealSpec::Rational(BigRational::new(p.into(), q.into()));
        let (f, g, _) = eval_f2g2_cf(&spec, 1e-9, 200).unwrap();
        let (hf, hg) = eval_series(rational_abscissa(p, q as u64), 2, 1e-11, Method::Hyperbola).unwrap();
        prop_assert!(f.agrees_with(&hf, 0.0), "F {} vs {}", f.value, hf.value);
        prop_assert!(g.agrees_with(&hg, 0.0), "G {} vs {}", g.value, hg.value);
    }
}
