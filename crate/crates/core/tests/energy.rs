use powerset_core::energy::{
    additive_energy, brute_force_energy, construct_sporadic, construct_three_ap, run_energy, solution_exponent_bound,
    sumset_size, EnergyConfig, SumsetSize,
};
use powerset_core::realcore::Exponent;

fn ex(s: &str) -> Exponent {
    s.parse().unwrap()
}

#[test]
fn matches_oracle_on_small_ranges() {
    for (c, n) in [
        ("1", 12),
        ("1/2", 20),
        ("2", 14),
        ("plastic", 16),
        ("sqrt2", 12),
        ("-1", 12),
        ("0", 6),
    ] {
        let c = ex(c);
        let r = additive_energy(&c, n, 1024).unwrap();
        let o = brute_force_energy(&c, n, 1024).unwrap();
        assert!(r.certified, "{c}");
        assert_eq!(o.unresolved, 0);
        assert_eq!(
            (r.energy, r.trivial, r.nontrivial),
            (o.energy, o.trivial, o.nontrivial),
            "{c} N={n}"
        );
    }
}

#[test]
fn trivial_count_law() {
    for c in ["1/3", "3", "sqrt2", "pi/4"] {
        for n in [1u64, 2, 7, 25] {
            let r = additive_energy(&ex(c), n, 512).unwrap();
            assert_eq!(r.trivial, 2 * n * n - n);
        }
    }
    let r = additive_energy(&ex("0"), 5, 512).unwrap();
    assert_eq!(r.energy, 625);
    assert_eq!(r.sumset, 1);
}

#[test]
fn plastic_sixteen() {
    let r = additive_energy(&Exponent::plastic(), 16, 4096).unwrap();
    assert!(r.certified);
    assert!(r.nontrivial >= 8);
    let run = run_energy(
        &Exponent::plastic(),
        16,
        &EnergyConfig {
            collect_classes: true,
            ..Default::default()
        },
    )
    .unwrap();
    let classes = run.classes.unwrap();
    assert!(classes
        .iter()
        .any(|k| k.pairs.contains(&(1, 16)) && k.pairs.contains(&(4, 8))));
    assert_eq!(classes.len() as u64, r.sumset);
}

#[test]
fn dilation_closure() {
    // every nontrivial class at c = 1/2 survives scaling by k
    let c = ex("1/2");
    let n = 36u32;
    let run = run_energy(
        &c,
        n as u64,
        &EnergyConfig {
            collect_classes: true,
            ..Default::default()
        },
    )
    .unwrap();
    let classes = run.classes.unwrap();
    let find = |p: (u32, u32)| classes.iter().position(|k| k.pairs.contains(&p)).unwrap();
    for k in &classes {
        if k.pairs.len() < 2 {
            continue;
        }
        for s in 2..=n {
            let scaled: Vec<(u32, u32)> = k.pairs.iter().map(|&(i, j)| (i * s, j * s)).collect();
            if scaled.iter().any(|&(_, j)| j > n) {
                continue;
            }
            let home = find(scaled[0]);
            assert!(scaled.iter().all(|p| find(*p) == home));
        }
    }
}

#[test]
fn sumset_examples() {
    assert_eq!(sumset_size(&ex("1"), 4, 256).unwrap(), SumsetSize::Exact { value: 7 });
    assert_eq!(sumset_size(&ex("2"), 3, 256).unwrap(), SumsetSize::Exact { value: 6 });
    assert_eq!(
        sumset_size(&ex("sqrt2"), 64, 1024).unwrap(),
        SumsetSize::Exact { value: 2080 }
    );
}

#[test]
fn unresolved_collisions_widen_bounds() {
    let cfg = EnergyConfig {
        compare: powerset_core::realcore::CompareConfig {
            exact_paths: false,
            initial_precision: 128,
            max_precision: 256,
        },
        ..Default::default()
    };
    let r = run_energy(&ex("1"), 4, &cfg).unwrap().report;
    assert!(!r.certified);
    assert!(r.unresolved > 0);
    assert!(r.energy <= 44 && 44 <= r.energy_upper);
    assert!(r.sumset <= 7 && 7 <= r.sumset_upper);
}

#[test]
fn constructions() {
    for n in 2..=4 {
        let s = construct_sporadic(n).unwrap();
        assert!(s.verdict.is_equal());
        let c = s.c.approx_f64();
        assert!(c > 0.0 && c < solution_exponent_bound(s.quadruple[0]).unwrap().mid_f64());
        let t = construct_three_ap(n).unwrap();
        assert!(t.verdict.is_equal());
    }
    let s = construct_sporadic(3).unwrap();
    assert_eq!(s.quadruple, [64, 1, 16, 8]);
}

#[test]
fn cauchy_schwarz_support_bound() {
    for c in ["1", "1/2", "plastic"] {
        let r = additive_energy(&ex(c), 20, 1024).unwrap();
        let n4 = 20u64.pow(4);
        assert!(r.sumset <= 210);
        assert!(r.sumset >= n4.div_ceil(r.energy));
    }
}
