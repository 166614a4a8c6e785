//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any fails. Criteria 1-9 run on an 8-thread pool, then
//! again on a single thread; criterion 10 compares the two sets of reports.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::Instant;

use powerset_core::dissociation::{
    baker_wustholz_log, c0_log, check_dissociated, digit_positions, digit_query, feldman_log_bound, psi_log,
    DissociationVariant, Verdict, BOUND_PREC,
};
use powerset_core::energy::{additive_energy, construct_sporadic, run_energy, EnergyConfig};
use powerset_core::expsum::{
    fourth_moment_report, large_values_count, parseval_check, rep_count_profile, RepCountProfile,
};
use powerset_core::rational::{
    brute_force_rational_counts, classify_negative, negative_census, rational_asymptotic_report, reduce_rational_count,
    stated_count, RationalError,
};
use powerset_core::realcore::{
    CompareVerdict, DigitAnswer, DigitSequence, EqualityWitness, Exponent, LogMagnitude, RealBall,
};
use powerset_core::{Integer, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const PREC: u32 = 4096;
const ZETA_3_2: f64 = 2.612_375_348_685_488;

/// Set by criterion 3; criterion 4 falls back on it.
static REDUCTION_EXACT: AtomicBool = AtomicBool::new(false);

struct Outcome {
    pass: bool,
    detail: String,
    /// Everything the criterion computed, minus timings.
    report: Value,
}

type Check = fn() -> Outcome;

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

fn criterion_1() -> Outcome {
    let cs = [
        Exponent::sqrt2(),
        "pi/4".parse().unwrap(),
        "ball:0.500000001".parse().unwrap(),
    ];
    let mut pass = true;
    let mut rows = Vec::new();
    let mut slowest = 0f64;
    for c in &cs {
        for n in [64u64, 128, 256] {
            let (r, secs) = timed(|| additive_energy(c, n, PREC).unwrap());
            slowest = slowest.max(secs);
            let sumset = n * (n + 1) / 2;
            let ok = r.certified
                && r.energy == 2 * n * n - n
                && r.energy_upper == r.energy
                && r.nontrivial == 0
                && r.unresolved == 0
                && r.sumset == sumset
                && r.sumset_upper == sumset
                && secs <= 60.0;
            pass &= ok;
            rows.push(json!({ "c": c.to_string(), "N": n, "report": r, "ok": ok }));
        }
    }
    Outcome {
        pass,
        detail: format!("9 runs, E = 2N^2 - N and |S+S| = N(N+1)/2 certified; slowest {slowest:.2}s"),
        report: json!(rows),
    }
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    let mut slowest = 0f64;
    for n in 2u64..=5 {
        let s = construct_sporadic(n).unwrap();
        let want = [1u64 << (2 * n), 1, 1 << (n + 1), 1 << n];
        let algebraic = matches!(
            s.verdict,
            CompareVerdict::CertifiedEqual {
                witness: EqualityWitness::MinimalPolynomial
            }
        );
        let big_n = 1u64 << (2 * n);
        let cfg = EnergyConfig {
            collect_classes: true,
            ..EnergyConfig::with_max_precision(PREC)
        };
        let (run, secs) = timed(|| run_energy(&s.c, big_n, &cfg).unwrap());
        slowest = slowest.max(secs);
        let has = |classes: &[(u32, u32)], x: u64, y: u64| {
            let (x, y) = (x as u32, y as u32);
            classes.contains(&(x, y)) || classes.contains(&(y, x))
        };
        let counted = run
            .classes
            .as_ref()
            .unwrap()
            .iter()
            .any(|k| k.pairs.len() >= 2 && has(&k.pairs, want[0], want[1]) && has(&k.pairs, want[2], want[3]));
        let r = run.report;
        let ok = s.quadruple == want && algebraic && r.nontrivial >= 8 && counted && secs <= 300.0;
        pass &= ok;
        rows.push(json!({ "n": n, "c": s.c.to_string(), "quadruple": s.quadruple, "energy": r, "in_same_class": counted, "ok": ok }));
    }
    Outcome {
        pass,
        detail: format!("n = 2..5 certified by minimal polynomial, counted at N = 2^(2n); N = 1024 took {slowest:.1}s"),
        report: json!(rows),
    }
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    let (_, secs) = timed(|| {
        for (a, q) in [(1i64, 2u64), (1, 3)] {
            let direct = brute_force_rational_counts(a, q, 150).unwrap();
            let mut mismatches = Vec::new();
            for n in 1..=150u64 {
                let reduced = reduce_rational_count(a, q, n).unwrap();
                if reduced != direct[n as usize] {
                    mismatches.push(json!([n, reduced, direct[n as usize]]));
                }
            }
            pass &= mismatches.is_empty();
            rows.push(json!({ "a": a, "q": q, "B_150": direct[150], "mismatches": mismatches }));
        }
    });
    pass &= secs <= 600.0;
    REDUCTION_EXACT.store(pass, AtomicOrdering::SeqCst);
    Outcome {
        pass,
        detail: format!("c = 1/2, 1/3: reduction equals enumeration for every N <= 150 ({secs:.1}s)"),
        report: json!(rows),
    }
}

fn criterion_4() -> Outcome {
    let half = rational_asymptotic_report(1, 2, &[1000, 10_000]).unwrap();
    let third = rational_asymptotic_report(1, 3, &[10_000]).unwrap();
    let within = |v: Option<f64>, target: f64| v.is_some_and(|x| (x / target - 1.0).abs() <= 0.25);
    let fits = half.rows.iter().all(|r| within(r.normalized, ZETA_3_2)) && within(third.rows[0].normalized, 1.0);
    let exact = REDUCTION_EXACT.load(AtomicOrdering::SeqCst);
    let norm = |r: &powerset_core::rational::AsymptoticReport| {
        r.rows
            .iter()
            .map(|x| format!("{:.4}", x.normalized.unwrap_or(f64::NAN)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    // B(1, M) ~ (2/3) M^3, so the constants become 2 zeta(3/2) / (3 zeta(3)) and 2 / (3 zeta(3))
    let discrepancy = json!({
        "convention": "ordered quadruples with x1 not in {x3, x4}; sum over q-th-power-free b",
        "stated_constants": { "1/2": ZETA_3_2, "1/3": 1.0 },
        "corrected_constants": { "1/2": 2.0 * ZETA_3_2 / (3.0 * 1.202_056_903_159_594), "1/3": 2.0 / (3.0 * 1.202_056_903_159_594) },
        "rows_1_2": half.rows,
        "rows_1_3": third.rows,
    });
    let detail = if fits {
        "within 25% of the stated constants".to_string()
    } else {
        format!(
            "outside 25% (B/N^1.5 = {} vs 2.6124; B/(N log N) = {} vs 1); passes by the fallback clause: criterion 3 {} and discrepancy report emitted (displayed closed form uses B(1,M) ~ M^3, actual ~ (2/3)M^3)",
            norm(&half),
            norm(&third),
            if exact { "exact" } else { "NOT exact" }
        )
    };
    Outcome {
        pass: fits || exact,
        detail,
        report: json!({ "fits": fits, "discrepancy": discrepancy }),
    }
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    let mut first_failure = None;
    let (_, secs) = timed(|| {
        for n in 1u64..=3 {
            for big_n in [25u64, 50, 120] {
                let census = negative_census(n, big_n).unwrap();
                let stated = stated_count(n, big_n);
                let (ok, outcome) = match classify_negative(n, big_n) {
                    Ok(c) => (
                        c.count == census.total && c.count == stated,
                        json!({ "count": c.count }),
                    ),
                    Err(RationalError::ClassificationViolation { witness, .. }) => {
                        if first_failure.is_none() {
                            first_failure = Some(format!(
                                "n = {n}, N = {big_n}: {} solutions, {} generator multiples (stated {stated}), {} outside, e.g. {witness:?}",
                                census.total, census.generator_multiples, census.violations
                            ));
                        }
                        (false, json!({ "violation": witness }))
                    }
                    Err(e) => panic!("{e}"),
                };
                pass &= ok;
                rows.push(json!({
                    "n": n,
                    "N": big_n,
                    "census": census,
                    "stated_count": stated,
                    "generator_multiples_match_stated": census.generator_multiples == stated,
                    "classification": outcome,
                }));
            }
        }
    });
    pass &= secs <= 120.0;
    Outcome {
        pass,
        detail: match first_failure {
            Some(f) => format!("classification does not cover every solution; {f}"),
            None => format!("all 9 cases match ({secs:.1}s)"),
        },
        report: json!(rows),
    }
}

fn log_f64(m: &LogMagnitude) -> f64 {
    m.log_value().as_plain().expect("plain").mid_f64()
}

/// Nonincreasing: a larger parameter never gives a certified larger log.
fn nonincreasing(a: &LogMagnitude, b: &LogMagnitude) -> bool {
    a.log_value().cmp_certified(b.log_value()) != Some(std::cmp::Ordering::Less)
}

fn criterion_6() -> Outcome {
    let one = RealBall::one(BOUND_PREC);
    let psi = psi_log(1, 2, 1, 1, &one).unwrap();
    let want = -(Integer::from(1) << 600u32);
    let psi_ok = psi.log_value().to_exact_integer() == Some(want.clone());
    let digits = want.to_string().trim_start_matches('-').len();

    let bw = baker_wustholz_log(2, &RealBall::from_u64(10, BOUND_PREC)).unwrap();
    let ln10 = std::f64::consts::LN_10;
    let expected = -(32f64.powi(8)) * ln10 * ln10;
    let rel = (log_f64(&bw) / expected - 1.0).abs();
    let bw_ok = rel < 5e-13;

    let mut violations = Vec::new();
    let mut points = [0usize; 3];
    let c8 = RealBall::from_u64(3, BOUND_PREC);
    for a in 1..=10u64 {
        for n in 2..=11u64 {
            for q in 1..=10u64 {
                points[0] += 1;
                let v = psi_log(a, n, 1, q, &c8).unwrap();
                for (da, dn, dq) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)] {
                    let w = psi_log(a + da, n + dn, 1, q + dq, &c8).unwrap();
                    if !nonincreasing(&v, &w) {
                        violations.push(json!(["psi", a, n, q]));
                    }
                }
            }
        }
    }
    for m in 1..=10u64 {
        for n in 3..=102u64 {
            points[1] += 1;
            let v = c0_log(m, &RealBall::from_u64(n, BOUND_PREC)).unwrap();
            let up_n = c0_log(m, &RealBall::from_u64(n + 1, BOUND_PREC)).unwrap();
            let up_m = c0_log(m + 1, &RealBall::from_u64(n, BOUND_PREC)).unwrap();
            if !nonincreasing(&v, &up_n) || !nonincreasing(&v, &up_m) {
                violations.push(json!(["c0", m, n]));
            }
        }
    }
    let c3 = RealBall::from_u64(3, BOUND_PREC);
    for a_max in 1..=10u64 {
        for n in 1..=10u64 {
            for a in 1..=10u64 {
                points[2] += 1;
                let v = feldman_log_bound(1, 2, a_max, n, a, &c3).unwrap();
                for (dx, dn, da) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)] {
                    let w = feldman_log_bound(1, 2, a_max + dx, n + dn, a + da, &c3).unwrap();
                    if !nonincreasing(&v, &w) {
                        violations.push(json!(["feldman", a_max, n, a]));
                    }
                }
            }
        }
    }
    let pass = psi_ok && digits == 181 && bw_ok && violations.is_empty() && points.iter().all(|&p| p == 1000);
    Outcome {
        pass,
        detail: format!(
            "psi log = -2^600 exactly ({digits} digits); Baker-Wustholz relative error {rel:.1e}; {} monotonicity violations over 3 x 1000 grid points",
            violations.len()
        ),
        report: json!({
            "psi_log": psi.log_value().describe(30),
            "baker_wustholz_log": bw.log_value().describe(30),
            "violations": violations,
        }),
    }
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for rule in ["digits:2:toy-sum:1:1", "digits:2:toy-product:1:1"] {
        let seq: DigitSequence = rule.parse().unwrap();
        let r = digit_positions(&seq, 6, 256).unwrap();
        let ok = r.positions.len() == 6 && r.all_stages_hold;
        pass &= ok;
        rows.push(json!({ "rule": rule, "positions": r.positions, "all_stages_hold": r.all_stages_hold }));
    }
    let seq: DigitSequence = "digits:10:corollary:1".parse().unwrap();
    let r = digit_positions(&seq, 3, 256).unwrap();
    let d2 = r.positions[1].as_exact() == Some(&Integer::from(10_000));
    let d3_depth = r.positions[2].depth();
    pass &= d2 && d3_depth == 2;
    let mut slowest = 0f64;
    let mut ones = Vec::new();
    for p in (1..=1_000_000u64).step_by(997).chain([10_000, 1_000_000]) {
        let pos = Integer::from(p);
        let (answer, secs) = timed(|| digit_query(&seq, &pos));
        slowest = slowest.max(secs);
        match answer {
            DigitAnswer::One => ones.push(p),
            DigitAnswer::Zero => {}
            DigitAnswer::Unknown { .. } => pass = false,
        }
    }
    ones.sort_unstable();
    ones.dedup();
    pass &= slowest <= 1e-3 && ones == [1, 10_000];
    rows.push(json!({ "rule": "digits:10:corollary:1", "positions": r.positions, "ones_up_to_1e6": ones }));
    Outcome {
        pass,
        detail: format!(
            "toy rules give 6 verified stages; corollary d2 = 10000, d3 tower depth {d3_depth}; slowest query {:.3} ms",
            slowest * 1e3
        ),
        report: json!(rows),
    }
}

fn criterion_8() -> Outcome {
    let half = Exponent::rational(1, 2).unwrap();
    let (primes, secs) = timed(|| check_dissociated(&[2, 3, 5, 7, 11], &half, DissociationVariant::Full, 512).unwrap());
    let plastic = check_dissociated(&[16, 8, 4, 1], &Exponent::plastic(), DissociationVariant::Full, 512).unwrap();
    let pass = primes.verdict == Verdict::Dissociated
        && primes.evidence["sign_vectors_checked"] == 242
        && primes.evidence["unresolved"] == 0
        && secs <= 1.0
        && plastic.verdict == Verdict::NotDissociated
        && plastic.evidence["witness"] == json!([1, -1, -1, 1]);
    Outcome {
        pass,
        detail: format!(
            "{{2,3,5,7,11}} at 1/2 dissociated, 242 sums certified in {secs:.3}s; {{16,8,4,1}} at log2 plastic witness {}",
            plastic.evidence["witness"]
        ),
        report: json!({ "primes": primes, "plastic": plastic }),
    }
}

fn criterion_9() -> Outcome {
    let mut pass = true;
    let mut worst = 0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut random = Vec::new();
    for _ in 0..100 {
        let q = rng.random_range(1..=300usize);
        let phi: Vec<u64> = (0..q).map(|_| rng.random_range(0..=64u64)).collect();
        let r = parseval_check(&RepCountProfile::from_counts(phi)).unwrap();
        worst = worst.max(r.relative_residual);
        pass &= r.certified && r.relative_residual <= 1e-9;
        random.push(r.lhs);
    }
    let mut profiles = Vec::new();
    for n in 1..=64u64 {
        let p = rep_count_profile(&Exponent::sqrt2(), n, PREC).unwrap();
        let r = parseval_check(&p).unwrap();
        worst = worst.max(r.relative_residual);
        pass &= r.certified && r.relative_residual <= 1e-9 && r.lhs == p.energy();
        profiles.push(json!([n, r.q, r.lhs]));
    }
    let m = fourth_moment_report(&Exponent::sqrt2(), 32, PREC).unwrap();
    let moment_ok = m.q as u128 * m.energy == m.identity_value
        && m.identity_value == 1_064_448
        && m.prediction == 1_081_344
        && m.identity_round_trip == Some(true);
    pass &= moment_ok;
    let mut worst_ratio = 0f64;
    let mut sweep = Vec::new();
    for n in [32u64, 64] {
        for k in [2u64, 4, 8] {
            let r = large_values_count(&Exponent::sqrt2(), n, &Rational::from((n, k)), PREC).unwrap();
            worst_ratio = worst_ratio.max(r.ratio);
            pass &= r.undecided == 0 && r.ratio <= 16.0;
            sweep.push(r);
        }
    }
    Outcome {
        pass,
        detail: format!(
            "Parseval worst relative residual {worst:.1e} (100 random profiles, certified profiles of sqrt2 for N <= 64); Q E = {} vs 2N^2 Q = {}; worst large-values ratio {worst_ratio:.3}",
            m.identity_value, m.prediction
        ),
        report: json!({ "random_lhs": random, "profiles": profiles, "fourth_moment": m, "large_values": sweep }),
    }
}

const CRITERIA: [(&str, Check); 9] = [
    ("energy saturation", criterion_1),
    ("sporadic construction", criterion_2),
    ("rational reduction exactness", criterion_3),
    ("asymptotic constants", criterion_4),
    ("negative-exponent classification", criterion_5),
    ("bound calculus", criterion_6),
    ("digit construction", criterion_7),
    ("dissociativity", criterion_8),
    ("expsum identities", criterion_9),
];

fn run_guarded(check: Check) -> Outcome {
    panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Outcome {
            pass: false,
            detail: format!("panicked: {msg}"),
            report: Value::Null,
        }
    })
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn main() -> ExitCode {
    // libtest arguments such as --nocapture are accepted and ignored
    let eight = pool(8);
    let one = pool(1);
    let mut failed = 0;
    let mut reports = Vec::new();
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let (out, secs) = timed(|| eight.install(|| run_guarded(*check)));
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!("criterion {} ({name}): {verdict} [{secs:.1}s] {}", i + 1, out.detail);
        reports.push(serde_json::to_string(&out.report).unwrap());
    }
    let mut differing = Vec::new();
    let (_, secs) = timed(|| {
        for (i, (_, check)) in CRITERIA.iter().enumerate() {
            let out = one.install(|| run_guarded(*check));
            if serde_json::to_string(&out.report).unwrap() != reports[i] || out.report.is_null() {
                differing.push(i + 1);
            }
        }
    });
    let verdict = if differing.is_empty() { "PASS" } else { "FAIL" };
    failed += usize::from(!differing.is_empty());
    println!(
        "criterion 10 (determinism): {verdict} [{secs:.1}s] reports of criteria 1-9 on 8 and 1 threads {}",
        if differing.is_empty() {
            "are byte-identical".to_string()
        } else {
            format!("differ for {differing:?}")
        }
    );
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
