use std::time::Instant;

use powerset_core::dissociation::*;
use powerset_core::realcore::{DigitAnswer, DigitSequence, Exponent, RealBall};
use rug::Integer;

fn half() -> Exponent {
    Exponent::rational(1, 2).unwrap()
}

#[test]
fn nonvanishing_square_roots() {
    let form = LinearForm::new(vec![1, 1, 1, -4], vec![2, 3, 5, 7], half()).unwrap();
    let cert = verify_nonvanishing(&form, 512).unwrap();
    assert_eq!(cert.verdict, Verdict::Nonvanishing);
    assert_eq!(cert.evidence["sign"], "negative");
    let dec = cert.evidence["enclosure"]["decimal"].as_str().unwrap();
    let v: f64 = dec.split(' ').next().unwrap().parse().unwrap();
    assert!((v + 5.2007).abs() < 1e-4, "{dec}");
    let diag = &cert.evidence["diagnostics"];
    assert_eq!(diag["case"], "alpha_nonzero");
    assert!(recheck(&cert).unwrap().ok());
}

#[test]
fn sporadic_form_is_zero() {
    let form = LinearForm::new(vec![1, 1, -1, -1], vec![16, 1, 8, 4], Exponent::plastic()).unwrap();
    let cert = verify_nonvanishing(&form, 512).unwrap();
    assert_eq!(cert.verdict, Verdict::ZeroCertified);
    assert_eq!(cert.evidence["witness"], "minimal_polynomial");
    assert!(recheck(&cert).unwrap().ok());
}

#[test]
fn trivial_form_rejected() {
    assert!(LinearForm::new(vec![0, 0], vec![2, 3], half()).is_err());
    assert!(LinearForm::new(vec![1], vec![0], half()).is_err());
}

#[test]
fn decomposition_remainder_within_bounds() {
    use rug::Rational;
    for k in [20u32, 40] {
        let eps = Rational::from((1, Integer::from(1) << k));
        let c = Rational::from((1, 2)) + &eps;
        let c: Exponent = format!("ball:{}/{}+-0", c.numer(), c.denom()).parse().unwrap();
        let form = LinearForm::new(vec![1, 1, 1, -4], vec![2, 3, 5, 7], c).unwrap();
        let r = powerset_core::realcore::RationalExponent::new(1, 2).unwrap();
        let d = decomposition(&form, r).unwrap();
        assert_eq!(d.corrected_bound_holds, Some(true), "k = {k}: {d:?}");
        assert_eq!(d.stated_bound_holds, Some(true), "k = {k}: {d:?}");
    }
}

#[test]
fn dissociated_examples() {
    let cert = check_dissociated(&[2, 3, 5], &half(), DissociationVariant::Full, 512).unwrap();
    assert_eq!(cert.verdict, Verdict::Dissociated);
    assert_eq!(cert.evidence["sign_vectors_checked"], 26);
    let cert = check_dissociated(&[16, 8, 4, 1], &Exponent::plastic(), DissociationVariant::Full, 512).unwrap();
    assert_eq!(cert.verdict, Verdict::NotDissociated);
    assert_eq!(cert.evidence["witness"], serde_json::json!([1, -1, -1, 1]));
    assert!(recheck(&cert).unwrap().ok());
    let cert = check_dissociated(&[1], &Exponent::sqrt2(), DissociationVariant::Full, 256).unwrap();
    assert_eq!(cert.verdict, Verdict::Dissociated);
    let cert = check_dissociated(&[16, 8, 4, 1], &Exponent::plastic(), DissociationVariant::ZeroSum, 512).unwrap();
    assert_eq!(cert.verdict, Verdict::NotDissociated);
}

#[test]
fn dissociated_five_primes_fast() {
    let t = Instant::now();
    let cert = check_dissociated(&[2, 3, 5, 7, 11], &half(), DissociationVariant::Full, 512).unwrap();
    assert_eq!(cert.verdict, Verdict::Dissociated);
    assert_eq!(cert.evidence["sign_vectors_checked"], 242);
    assert!(t.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn dissociated_rejects_bad_sets() {
    let c = half();
    assert!(check_dissociated(&[], &c, DissociationVariant::Full, 256).is_err());
    assert!(check_dissociated(&[2, 2], &c, DissociationVariant::Full, 256).is_err());
    let big: Vec<u64> = (2..19).collect();
    assert!(check_dissociated(&big, &c, DissociationVariant::Full, 256).is_err());
}

#[test]
fn multiplicative_examples() {
    assert_eq!(
        multiplicative_independence(&[2, 3, 5]).unwrap(),
        Multiplicative::Independent
    );
    assert_eq!(
        multiplicative_independence(&[4, 8]).unwrap(),
        Multiplicative::Relation { exponents: vec![3, -2] }
    );
    assert_eq!(
        multiplicative_independence(&[16, 8, 4]).unwrap(),
        Multiplicative::Relation {
            exponents: vec![1, -2, 1]
        }
    );
    assert_eq!(
        multiplicative_independence(&[3, 1]).unwrap(),
        Multiplicative::Relation { exponents: vec![0, 1] }
    );
    let cert = relation_certificate(&[6, 10, 15, 7]).unwrap();
    assert_eq!(cert.verdict, Verdict::Independent);
    let cert = relation_certificate(&[12, 18, 2, 3]).unwrap();
    assert_eq!(cert.verdict, Verdict::Relation);
    assert!(recheck(&cert).unwrap().ok());
}

#[test]
fn relations_verify_exactly() {
    for x in [
        vec![6u64, 10, 15],
        vec![12, 18, 27, 8],
        vec![1024, 32, 4, 9, 27],
        vec![36, 6, 216],
    ] {
        if let Multiplicative::Relation { exponents } = multiplicative_independence(&x).unwrap() {
            assert!(verify_relation(&x, &exponents), "{x:?} {exponents:?}");
        }
    }
    // 6*10 = 4*15 needs the prime 2 as well; (6,10,15) alone is independent
    assert_eq!(
        multiplicative_independence(&[6, 10, 15]).unwrap(),
        Multiplicative::Independent
    );
}

#[test]
fn independent_set_failing_dissociation_lies_above_threshold() {
    // 2 + 3 = 5 at c = 1, with 2, 3, 5 multiplicatively independent
    let set = [2, 3, 5];
    assert_eq!(multiplicative_independence(&set).unwrap(), Multiplicative::Independent);
    let c = Exponent::rational(1, 1).unwrap();
    let cert = check_dissociated(&set, &c, DissociationVariant::Full, 256).unwrap();
    assert_eq!(cert.verdict, Verdict::NotDissociated);
    let c0 = c0_log(3, &RealBall::from_u64(5, BOUND_PREC)).unwrap();
    // log c = 0 is far above log c0
    let zero = powerset_core::realcore::Scalar::from_i64(0, BOUND_PREC);
    assert_eq!(c0.log_value().cmp_certified(&zero), Some(std::cmp::Ordering::Less));
}

#[test]
fn certificate_tamper_detected() {
    let cert = check_dissociated(&[2, 3, 5], &half(), DissociationVariant::Full, 256).unwrap();
    let json = cert.to_canonical_json();
    let back = Certificate::from_json(&json).unwrap();
    assert_eq!(back, cert);
    assert_eq!(back.to_canonical_json(), json);
    let mut bad = back.clone();
    bad.verdict = Verdict::NotDissociated;
    let r = recheck(&bad).unwrap();
    assert!(!r.hash_valid && !r.verdict_reproduced);
}

#[test]
fn corollary_digits() {
    let seq: DigitSequence = "digits:10:corollary:1".parse().unwrap();
    let r = digit_positions(&seq, 3, 256).unwrap();
    assert_eq!(r.positions[1].as_exact(), Some(&Integer::from(10000)));
    assert_eq!(r.positions[2].depth(), 2);
    assert_eq!(digit_query(&seq, &Integer::from(10000)), DigitAnswer::One);
    assert_eq!(digit_query(&seq, &Integer::from(9999)), DigitAnswer::Zero);
    assert_eq!(digit_query(&seq, &Integer::from(1)), DigitAnswer::One);
    let t = Instant::now();
    for p in (1..=1_000_000u64).step_by(99_991) {
        digit_query(&seq, &Integer::from(p));
    }
    assert!(t.elapsed().as_secs_f64() < 0.011);
}

#[test]
fn toy_digits_six_stages() {
    for rule in [
        "digits:2:toy-sum:1:1",
        "digits:2:toy-product:1:1",
        "digits:10:toy-sum:1:1",
    ] {
        let seq: DigitSequence = rule.parse().unwrap();
        let r = digit_positions(&seq, 6, 256).unwrap();
        assert_eq!(r.positions.len(), 6, "{rule}: {:?}", r.stopped);
        assert_eq!(r.stages.len(), 5);
        assert!(r.all_stages_hold, "{rule}: {:?}", r.stages);
    }
}

#[test]
fn toy_product_stops_at_depth_limit() {
    let seq: DigitSequence = "digits:2:toy-product:1:1".parse().unwrap();
    let r = digit_positions(&seq, 8, 256).unwrap();
    assert_eq!(r.positions.len(), 6);
    assert!(r.stopped.as_deref().unwrap().contains("depth limit"), "{:?}", r.stopped);
    assert!(r.all_stages_hold, "{:?}", r.stages);
}
