//! Solutions of `x1^-n + x2^-n = x3^-n + x4^-n` and the generator classification.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use super::RationalError;

pub const GENERATORS_N1: [[u64; 4]; 3] = [[1, 1, 1, 1], [1, 2, 2, 1], [1, 2, 1, 2]];
pub const GENERATORS: [[u64; 4]; 1] = [[1, 1, 1, 1]];

pub fn generators(n: u64) -> &'static [[u64; 4]] {
    if n == 1 {
        &GENERATORS_N1
    } else {
        &GENERATORS
    }
}

/// Whether `x` is a positive integer multiple of `g`.
pub fn is_multiple_of(x: &[u64; 4], g: &[u64; 4]) -> bool {
    if x[0] % g[0] != 0 {
        return false;
    }
    let k = x[0] / g[0];
    x.iter().zip(g).all(|(xi, gi)| *xi == k * gi)
}

/// Full solution census in `[N]^4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeCensus {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub total: u64,
    pub trivial: u64,
    pub nontrivial: u64,
    /// Solutions that are multiples of a listed generator.
    pub generator_multiples: u64,
    pub violations: u64,
    /// Lexicographically least solution outside the generator multiples.
    pub first_violation: Option<[u64; 4]>,
    /// Lexicographically least nontrivial solution.
    pub first_nontrivial: Option<[u64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeClassification {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub generators: Vec<[u64; 4]>,
    pub count: u64,
}

/// `x^-n + y^-n` in lowest terms, i.e. `(x^n + y^n) / (xy)^n`.
fn key(x: u64, y: u64, n: u32) -> Rational {
    let (px, py) = (Integer::from(x).pow(n), Integer::from(y).pow(n));
    Rational::from((Integer::from(&px + &py), px * py))
}

fn keep_least(slot: &mut Option<[u64; 4]>, x: [u64; 4]) {
    if slot.map_or(true, |y| x < y) {
        *slot = Some(x);
    }
}

/// Enumerates every solution by grouping ordered pairs with equal cleared sums.
pub fn negative_census(n: u64, big_n: u64) -> Result<NegativeCensus, RationalError> {
    if n == 0 || big_n == 0 {
        return Err(RationalError::InvalidInput("n and N must be positive".into()));
    }
    let e = u32::try_from(n).map_err(|_| RationalError::InvalidInput("n too large".into()))?;
    let mut pairs: Vec<(Rational, u64, u64)> = (1..=big_n)
        .into_par_iter()
        .flat_map_iter(|x| (1..=big_n).map(move |y| (key(x, y, e), x, y)))
        .collect();
    pairs.par_sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let gens = generators(n);
    let mut census = NegativeCensus {
        n,
        big_n,
        total: 0,
        trivial: 0,
        nontrivial: 0,
        generator_multiples: 0,
        violations: 0,
        first_violation: None,
        first_nontrivial: None,
    };
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i;
        while j < pairs.len() && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        for p in &pairs[i..j] {
            for r in &pairs[i..j] {
                let x = [p.1, p.2, r.1, r.2];
                census.total += 1;
                if x[0] == x[2] || x[0] == x[3] {
                    census.trivial += 1;
                } else {
                    census.nontrivial += 1;
                    keep_least(&mut census.first_nontrivial, x);
                }
                if gens.iter().any(|g| is_multiple_of(&x, g)) {
                    census.generator_multiples += 1;
                } else {
                    census.violations += 1;
                    keep_least(&mut census.first_violation, x);
                }
            }
        }
        i = j;
    }
    Ok(census)
}

/// Counts the solutions and checks that each is a multiple of a generator.
/// A solution outside the classification is returned as an error.
pub fn classify_negative(n: u64, big_n: u64) -> Result<NegativeClassification, RationalError> {
    let census = negative_census(n, big_n)?;
    if let Some(witness) = census.first_violation {
        return Err(RationalError::ClassificationViolation {
            n,
            big_n,
            witness,
            census: Box::new(census),
        });
    }
    Ok(NegativeClassification {
        n,
        big_n,
        generators: generators(n).to_vec(),
        count: census.total,
    })
}

/// The count stated for the generator multiples: `N`, or `N + 2 floor(N/2)` when `n = 1`.
pub fn stated_count(n: u64, big_n: u64) -> u64 {
    if n == 1 {
        big_n + 2 * (big_n / 2)
    } else {
        big_n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_multiples_follow_the_stated_count() {
        for (n, big_n) in [(1, 5), (1, 50), (2, 50), (3, 25)] {
            let c = negative_census(n, big_n).unwrap();
            assert_eq!(c.generator_multiples, stated_count(n, big_n));
            assert_eq!(c.trivial, 2 * big_n * big_n - big_n);
        }
    }

    #[test]
    fn trivial_swap_is_outside_the_classification() {
        let c = negative_census(2, 5).unwrap();
        assert_eq!(c.first_violation, Some([1, 2, 1, 2]));
        match classify_negative(1, 5) {
            Err(RationalError::ClassificationViolation { witness, .. }) => assert_eq!(witness, [1, 3, 1, 3]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn known_nontrivial_solutions() {
        // 1/2 + 1/6 = 1/3 + 1/3
        assert_eq!(negative_census(1, 6).unwrap().first_nontrivial, Some([2, 6, 3, 3]));
        // 1/35^2 + 1/5^2 = 2/7^2
        let c = negative_census(2, 35).unwrap();
        assert!(c.nontrivial > 0);
        assert_eq!(c.first_nontrivial, Some([5, 35, 7, 7]));
    }
}
