//! Nontrivial solution counts for integer and rational exponents.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use super::RationalError;
use crate::realcore::exact::qth_power_free;

/// Value of `x^a + y^a` as an exact key; negative `a` gives a reduced fraction.
fn pair_key(x: u64, y: u64, a: i64) -> Rational {
    let e = a.unsigned_abs() as u32;
    let (px, py) = (Integer::from(x).pow(e), Integer::from(y).pow(e));
    if a > 0 {
        Rational::from(px + py)
    } else {
        Rational::from((Integer::from(&px + &py), px * py))
    }
}

/// Ordered nontrivial solutions of `x1^a + x2^a = x3^a + x4^a` in `[m]^4`.
///
/// Pair sums are hashed exactly; since `x -> x^a` is injective for `a != 0`,
/// the trivial solutions number `2m^2 - m`.
pub fn integer_energy_nontrivial(a: i64, m: u64) -> Result<u64, RationalError> {
    if a == 0 {
        return Err(RationalError::InvalidInput(
            "the integer exponent must be nonzero".into(),
        ));
    }
    if m == 0 {
        return Ok(0);
    }
    let mut keys: Vec<(Rational, bool)> = (1..=m)
        .into_par_iter()
        .flat_map_iter(|x| (x..=m).map(move |y| (pair_key(x, y, a), x == y)))
        .collect();
    keys.par_sort_unstable_by(|p, q| p.0.cmp(&q.0));
    let mut energy: u64 = 0;
    let mut i = 0;
    while i < keys.len() {
        let mut r = 0u64;
        let mut j = i;
        while j < keys.len() && keys[j].0 == keys[i].0 {
            r += if keys[j].1 { 1 } else { 2 };
            j += 1;
        }
        energy += r * r;
        i = j;
    }
    Ok(energy - (2 * m * m - m))
}

/// Floor of the `q`-th root of `v`.
fn iroot(v: u64, q: u64) -> u64 {
    Integer::from(v).root(q as u32).to_u64().expect("root fits")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_reduction_args(a: i64, q: u64) -> Result<(), RationalError> {
    if a == 0 || q < 2 || gcd(a.unsigned_abs(), q) != 1 {
        return Err(RationalError::InvalidInput(format!(
            "need a != 0, q >= 2 and gcd(a, q) = 1, got a = {a}, q = {q}"
        )));
    }
    Ok(())
}

/// `B(a/q, N) = sum over q-th-power-free b <= N of B(a, floor((N/b)^(1/q)))`.
///
/// A nontrivial solution has all four `x_i = s_i^q b` with one common
/// `q`-th-power-free `b`, and that `b` is unique; summing over every `b`
/// instead counts each solution once per `q`-th power dividing `b`.
pub fn reduce_rational_count(a: i64, q: u64, n: u64) -> Result<u64, RationalError> {
    reduce_with(a, q, n, true)
}

/// The sum over every `b <= N`, as displayed in the reduction formula.
pub fn reduce_rational_count_unrestricted(a: i64, q: u64, n: u64) -> Result<u64, RationalError> {
    reduce_with(a, q, n, false)
}

fn reduce_with(a: i64, q: u64, n: u64, power_free_only: bool) -> Result<u64, RationalError> {
    check_reduction_args(a, q)?;
    let mut ms: HashMap<u64, u64> = HashMap::new();
    for b in 1..=n {
        let m = iroot(n / b, q);
        if m < 2 {
            break;
        }
        if power_free_only && qth_power_free(b, q).1 != b {
            continue;
        }
        *ms.entry(m).or_default() += 1;
    }
    let mut ms: Vec<(u64, u64)> = ms.into_iter().collect();
    ms.sort_unstable();
    let counts: Vec<u64> = ms
        .par_iter()
        .map(|&(m, _)| integer_energy_nontrivial(a, m))
        .collect::<Result<_, _>>()?;
    Ok(ms.iter().zip(counts).map(|(&(_, mult), b)| mult * b).sum())
}

/// `sum over b <= N of floor((N/b)^(1/q))^3`, the closed form displayed next to
/// the reduction; it equals the count only if `B(1, M)` were `M^3`.
pub fn displayed_cube_sum(q: u64, n: u64) -> u64 {
    (1..=n).map(|b| iroot(n / b, q).pow(3)).sum()
}

/// `x^(a/q) = s^a t^(a/q)` with `t` free of `q`-th powers; the weight `s^a`
/// is scaled by `scale^|a|` for negative `a` so that it stays integral.
#[derive(Clone, Copy)]
struct Surd {
    t: u64,
    w: i128,
}

fn surds(a: i64, q: u64, n_max: u64) -> Result<Vec<Surd>, RationalError> {
    let e = a.unsigned_abs() as u32;
    let parts: Vec<(Integer, u64)> = (0..=n_max).map(|x| qth_power_free(x.max(1), q)).collect();
    // negative exponents: multiply through by lcm(s)^|a|
    let scale = if a > 0 {
        Integer::from(1)
    } else {
        parts.iter().fold(Integer::from(1), |l, (s, _)| l.lcm(s))
    };
    parts
        .into_iter()
        .map(|(s, t)| {
            let w = if a > 0 {
                s.pow(e)
            } else {
                Integer::from(&scale / &s).pow(e)
            };
            w.to_i128()
                .map(|w| Surd { t, w })
                .ok_or_else(|| RationalError::InvalidInput("weights exceed 128 bits; reduce N or |a|".into()))
        })
        .collect()
}

/// Whether `x1^c + x2^c - x3^c - x4^c` vanishes: every `t` group must cancel.
fn quadruple_vanishes(s: [Surd; 4]) -> bool {
    const SIGN: [i128; 4] = [1, 1, -1, -1];
    (0..4).all(|i| {
        let mut acc = 0i128;
        for j in 0..4 {
            if s[j].t == s[i].t {
                acc += SIGN[j] * s[j].w;
            }
        }
        acc == 0
    })
}

/// `B(a/q, N)` for every `N <= n_max` by direct enumeration of quadruples.
/// Step `N` visits the quadruples whose largest entry is `N`, split by the
/// first position holding `N`.
pub fn brute_force_rational_counts(a: i64, q: u64, n_max: u64) -> Result<Vec<u64>, RationalError> {
    check_reduction_args(a, q)?;
    let sd = surds(a, q, n_max)?;
    let mut out = vec![0u64; n_max as usize + 1];
    for n in 1..=n_max {
        let fresh: u64 = (0..4usize)
            .into_par_iter()
            .map(|pos| {
                // entries before `pos` are below n, entry `pos` is n
                let r: [std::ops::RangeInclusive<u64>; 4] = std::array::from_fn(|k| match k.cmp(&pos) {
                    std::cmp::Ordering::Less => 1..=n - 1,
                    std::cmp::Ordering::Equal => n..=n,
                    std::cmp::Ordering::Greater => 1..=n,
                });
                let mut count = 0u64;
                for x1 in r[0].clone() {
                    for x2 in r[1].clone() {
                        for x3 in r[2].clone().filter(|&x3| x3 != x1) {
                            for x4 in r[3].clone().filter(|&x4| x4 != x1) {
                                if quadruple_vanishes([x1, x2, x3, x4].map(|x| sd[x as usize])) {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
                count
            })
            .sum();
        out[n as usize] = out[n as usize - 1] + fresh;
    }
    Ok(out)
}
