use std::cmp::Ordering;

use powerset_core::dissociation::{
    c0_log, feldman_log_bound, multiplicative_independence, psi_log, verify_relation, Multiplicative, BOUND_PREC,
};
use powerset_core::expsum::{parseval_check, RepCountProfile};
use powerset_core::realcore::{compare_sums, CompareVerdict, Exponent, LogMagnitude, RealBall};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

/// `x^(a/q)` at 2000 bits.
fn float_pow(x: u64, a: i64, q: u64) -> Float {
    let e = Float::with_val(2000, a) / q;
    Float::with_val(2000, x).pow(&e)
}

fn not_above(hi: &LogMagnitude, lo: &LogMagnitude) -> bool {
    lo.log_value().cmp_certified(hi.log_value()) != Some(Ordering::Greater)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn compare_is_sound(x in prop::array::uniform4(1u64..60), aq in prop::sample::select(vec![(1i64, 1u64), (2, 1), (1, 2), (1, 3), (2, 3), (-1, 2)])) {
        let (a, q) = aq;
        let c = Exponent::rational(a, q).unwrap();
        let v = compare_sums(&[(1, x[0]), (1, x[1])], &[(1, x[2]), (1, x[3])], &c, 1024).unwrap();
        let diff = float_pow(x[0], a, q) + float_pow(x[1], a, q) - float_pow(x[2], a, q) - float_pow(x[3], a, q);
        let tiny = Float::with_val(2000, Float::i_exp(1, -1500));
        match v {
            CompareVerdict::Less => prop_assert!(diff < 0),
            CompareVerdict::Greater => prop_assert!(diff > 0),
            CompareVerdict::CertifiedEqual { .. } => prop_assert!(diff.clone().abs() < tiny),
            CompareVerdict::Unresolved { .. } => prop_assert!(false, "rational exponents always resolve"),
        }
    }

    #[test]
    fn compare_is_antisymmetric(x in prop::array::uniform4(1u64..200)) {
        let c = Exponent::sqrt2();
        let l = [(1, x[0]), (1, x[1])];
        let r = [(1, x[2]), (1, x[3])];
        let ab = compare_sums(&l, &r, &c, 512).unwrap();
        let ba = compare_sums(&r, &l, &c, 512).unwrap();
        let flipped = match ab {
            CompareVerdict::Less => CompareVerdict::Greater,
            CompareVerdict::Greater => CompareVerdict::Less,
            other => other,
        };
        prop_assert_eq!(flipped, ba);
    }

    #[test]
    fn psi_nonincreasing(a in 1u64..1000, n in 1u64..1000, q in 1u64..50, s in 1u32..3, da in 0u64..100, dn in 0u64..100, dq in 0u64..10) {
        let c8 = RealBall::from_u64(3, BOUND_PREC);
        let v = psi_log(a, n, s, q, &c8).unwrap();
        let w = psi_log(a + da, n + dn, s, q + dq, &c8).unwrap();
        prop_assert!(not_above(&v, &w));
    }

    #[test]
    fn c0_nonincreasing(m in 1u64..12, n in 3u64..100_000, dm in 0u64..3, dn in 0u64..10_000) {
        let v = c0_log(m, &RealBall::from_u64(n, BOUND_PREC)).unwrap();
        let w = c0_log(m + dm, &RealBall::from_u64(n + dn, BOUND_PREC)).unwrap();
        prop_assert!(not_above(&v, &w));
    }

    #[test]
    fn feldman_nonincreasing(s in 1u64..4, q in 2u64..6, a_max in 1u64..100, n in 1u64..1000, a in 1u64..5, dx in 0u64..50, dn in 0u64..500) {
        let c3 = RealBall::from_u64(3, BOUND_PREC);
        let v = feldman_log_bound(s, q, a_max, n, a, &c3).unwrap();
        let w = feldman_log_bound(s, q, a_max + dx, n + dn, a, &c3).unwrap();
        prop_assert!(not_above(&v, &w));
    }

    #[test]
    fn parseval_on_random_profiles(phi in prop::collection::vec(0u64..1000, 1..400)) {
        let r = parseval_check(&RepCountProfile::from_counts(phi.clone())).unwrap();
        prop_assert!(r.certified);
        prop_assert!(r.relative_residual <= 1e-9);
        prop_assert_eq!(r.lhs, phi.iter().map(|&p| (p as u128) * (p as u128)).sum::<u128>());
    }

    #[test]
    fn relations_are_sound(x in prop::collection::vec(1u64..500, 1..5)) {
        match multiplicative_independence(&x).unwrap() {
            Multiplicative::Relation { exponents } => {
                prop_assert!(exponents.iter().any(|&e| e != 0));
                prop_assert!(verify_relation(&x, &exponents));
            }
            Multiplicative::Independent => {
                // no relation with entries in [-3, 3]
                let k = x.len() as u32;
                for code in 1..7u64.pow(k) {
                    let v: Vec<i64> = (0..k).map(|i| (code / 7u64.pow(i) % 7) as i64 - 3).collect();
                    if v.iter().all(|&e| e == 0) {
                        continue;
                    }
                    prop_assert!(!verify_relation(&x, &v), "{:?} {:?}", x, v);
                }
            }
        }
    }
}
