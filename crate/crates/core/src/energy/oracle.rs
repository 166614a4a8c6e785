//! Direct enumeration over quadruples, independent of the clustering engine.

use rayon::prelude::*;

use super::EnergyError;
use crate::realcore::{compare_sums, CompareVerdict, Exponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCount {
    pub energy: u64,
    pub trivial: u64,
    pub nontrivial: u64,
    pub unresolved: u64,
}

/// Counts ordered quadruples by comparing every pair of unordered pairs with
/// [`compare_sums`]. Cost is quartic in `N`.
pub fn brute_force_energy(c: &Exponent, n: u64, max_precision: u32) -> Result<OracleCount, EnergyError> {
    let pairs: Vec<(u64, u64)> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    let weight = |p: &(u64, u64)| if p.0 == p.1 { 1u64 } else { 2 };
    let per_row: Vec<OracleCount> = pairs
        .par_iter()
        .enumerate()
        .map(|(a, p)| {
            let mut acc = OracleCount {
                energy: 0,
                trivial: 0,
                nontrivial: 0,
                unresolved: 0,
            };
            for q in &pairs[a..] {
                let v = compare_sums(&[(1, p.0), (1, p.1)], &[(1, q.0), (1, q.1)], c, max_precision)?;
                match v {
                    CompareVerdict::CertifiedEqual { .. } => {
                        let mult = weight(p) * weight(q) * if p == q { 1 } else { 2 };
                        acc.energy += mult;
                        // x1 in {x3, x4} for ordered expansions of p and q
                        acc.trivial += if p == q {
                            ordered_trivial(*p, *p)
                        } else {
                            ordered_trivial(*p, *q) + ordered_trivial(*q, *p)
                        };
                    }
                    CompareVerdict::Unresolved { .. } => acc.unresolved += 1,
                    _ => {}
                }
            }
            Ok(acc)
        })
        .collect::<Result<_, EnergyError>>()?;
    let mut total = OracleCount {
        energy: 0,
        trivial: 0,
        nontrivial: 0,
        unresolved: 0,
    };
    for r in per_row {
        total.energy += r.energy;
        total.trivial += r.trivial;
        total.unresolved += r.unresolved;
    }
    total.nontrivial = total.energy - total.trivial;
    Ok(total)
}

/// Ordered quadruples `(x1,x2)` from `p` and `(x3,x4)` from `q` with `x1` in `{x3, x4}`.
fn ordered_trivial(p: (u64, u64), q: (u64, u64)) -> u64 {
    let expand = |t: (u64, u64)| if t.0 == t.1 { vec![t] } else { vec![t, (t.1, t.0)] };
    let mut n = 0;
    for (x1, _) in expand(p) {
        for (x3, x4) in expand(q) {
            if x1 == x3 || x1 == x4 {
                n += 1;
            }
        }
    }
    n
}
