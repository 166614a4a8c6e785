use powerset_core::energy::additive_energy;
use powerset_core::expsum::*;
use powerset_core::realcore::{compare_sums, Exponent, RealBall};
use rug::Rational;

fn one() -> Exponent {
    Exponent::rational(1, 1).unwrap()
}

#[test]
fn d_basic_values() {
    let c = Exponent::sqrt2();
    let d0 = exp_sum_d(&c, 10, &RealBall::zero(128), 128).unwrap();
    assert!(d0.re.is_exact() && d0.re.mid_f64() == 10.0 && d0.im.mid_f64() == 0.0);
    let half = RealBall::from_rational(&Rational::from((1, 2)), 128);
    let d = exp_sum_d(&one(), 4, &half, 128).unwrap();
    assert!(d.re.contains_float(&rug::Float::new(64)));
    assert!(d.abs_upper() < 1e-30);
    for k in 1..20u64 {
        let t = RealBall::from_rational(&Rational::from((k, 7)), 128);
        let d = exp_sum_d(&c, 16, &t, 128).unwrap();
        assert!(d.norm_sqr().lower() <= 256.0);
    }
}

#[test]
fn profiles_match_energy() {
    let p = rep_count_profile(&Exponent::sqrt2(), 2, 512).unwrap();
    assert_eq!((p.q, p.phi.clone()), (3, vec![1, 2, 1]));
    let p = rep_count_profile(&one(), 3, 512).unwrap();
    assert_eq!(p.phi, vec![1, 2, 3, 2, 1]);
    assert_eq!(p.energy(), 19);
    let p = rep_count_profile(&Exponent::sqrt2(), 32, 512).unwrap();
    assert_eq!(p.q, 528);
    assert_eq!(p.energy(), 2016);
    for (c, n) in [(Exponent::plastic(), 16u64), (Exponent::rational(1, 2).unwrap(), 20)] {
        let p = rep_count_profile(&c, n, 1024).unwrap();
        let e = additive_energy(&c, n, 1024).unwrap();
        assert_eq!(p.total(), n * n);
        assert_eq!(p.energy(), e.energy as u128);
        assert!(p
            .values
            .windows(2)
            .all(|w| w[0].cmp_certified(&w[1]) == Some(std::cmp::Ordering::Less)));
    }
}

#[test]
fn parseval_examples() {
    for phi in [vec![1u64, 2, 1], vec![1, 2, 3, 2, 1]] {
        let r = parseval_check(&RepCountProfile::from_counts(phi)).unwrap();
        assert!(r.certified);
        assert!(r.relative_residual < 1e-9);
    }
    let r = parseval_check(&RepCountProfile::from_counts(vec![1, 2, 3, 2, 1])).unwrap();
    assert_eq!(r.lhs, 19);
}

#[test]
fn fourth_moment_examples() {
    let r = fourth_moment_report(&Exponent::sqrt2(), 32, 512).unwrap();
    assert_eq!((r.q, r.energy), (528, 2016));
    assert_eq!(r.identity_value, 1_064_448);
    assert_eq!(r.prediction, 1_081_344);
    assert_eq!(r.difference, 16_896);
    assert_eq!(r.identity_round_trip, Some(true));
    let r = fourth_moment_report(&one(), 3, 512).unwrap();
    assert_eq!((r.q, r.energy, r.identity_value, r.prediction), (5, 19, 95, 90));
    let r = fourth_moment_report(&Exponent::plastic(), 16, 1024).unwrap();
    let e = additive_energy(&Exponent::plastic(), 16, 1024).unwrap();
    assert_eq!(r.energy, e.energy as u128);
    assert_eq!(r.q as u64, e.sumset);
    assert_eq!(r.identity_value, r.q as u128 * r.energy);
}

#[test]
fn large_values_examples() {
    let c = Exponent::sqrt2();
    let r = large_values_count(&c, 16, &Rational::from(17), 512).unwrap();
    assert_eq!(r.count, 0);
    for k in [2u64, 4, 8] {
        let r = large_values_count(&c, 32, &Rational::from((32, k)), 512).unwrap();
        assert_eq!(r.undecided, 0);
        assert!(r.ratio <= 16.0, "V = N/{k}: {r:?}");
    }
}

#[test]
fn window_examples() {
    let c = Exponent::sqrt2();
    let r = window_pair_count(&c, 8, &WindowTarget::Value(Rational::new()), 512, None).unwrap();
    assert_eq!(r.count, 8);
    let r = window_pair_count(&c, 8, &WindowTarget::Difference { x1: 2, x2: 1 }, 512, None).unwrap();
    assert_eq!(r.count, 1);
    let r = window_pair_count(&c, 8, &WindowTarget::Value(Rational::from(30)), 512, None).unwrap();
    assert_eq!(r.count, 0);
}

#[test]
fn window_difference_counts_match_enumeration() {
    let c = Exponent::plastic();
    let n = 16u64;
    for (x1, x2) in [(16, 8), (4, 1), (9, 3), (5, 5)] {
        let r = window_pair_count(&c, n, &WindowTarget::Difference { x1, x2 }, 1024, None).unwrap();
        let mut direct = 0;
        for a in 1..=n {
            for b in 1..=n {
                if compare_sums(&[(1, a), (1, x2)], &[(1, x1), (1, b)], &c, 1024)
                    .unwrap()
                    .is_equal()
                {
                    direct += 1;
                }
            }
        }
        assert_eq!(r.count, direct, "({x1},{x2})");
    }
}
