//! The summation lemma `sum (N/b)^alpha`, zeta values and the divisor moment.

use rug::{Float, Rational};
use serde::Serialize;

use super::RationalError;
use crate::realcore::RealBall;

const SUM_PREC: u32 = 128;

/// Enclosure of `zeta(s)` for real rational `s != 1`; MPFR rounds correctly,
/// so one ulp at the working precision bounds the error.
pub fn zeta(s: &Rational, prec: u32) -> Result<RealBall, RationalError> {
    if *s == 1 {
        return Err(RationalError::InvalidInput("zeta has a pole at 1".into()));
    }
    let p = prec + 16;
    let z = Float::with_val(p, s).zeta();
    let ulp = Float::with_val(64, 1) << (z.get_exp().unwrap_or(0) - p as i32 + 1);
    Ok(RealBall::with_radius(z, &ulp))
}

#[derive(Debug, Clone, Serialize)]
pub struct PartialSum {
    pub alpha: String,
    #[serde(rename = "N")]
    pub n: u64,
    /// `log` for `alpha = 1`, `zeta` otherwise.
    pub branch: String,
    #[serde(serialize_with = "ball_decimal")]
    pub exact: RealBall,
    #[serde(serialize_with = "ball_decimal")]
    pub prediction: RealBall,
    #[serde(serialize_with = "ball_decimal")]
    pub difference: RealBall,
}

fn ball_decimal<S: serde::Serializer>(b: &RealBall, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_decimal(20))
}

/// `sum over b <= N of (N/b)^alpha` with the main term of the summation
/// lemma: `N log N` for `alpha = 1`, else `N/(1 - alpha) + zeta(alpha) N^alpha`.
pub fn partial_sum(alpha: &Rational, n: u64) -> Result<PartialSum, RationalError> {
    if *alpha <= 0 || n == 0 {
        return Err(RationalError::InvalidInput("need alpha > 0 and N >= 1".into()));
    }
    let p = SUM_PREC;
    let a = RealBall::from_rational(alpha, p);
    let mut exact = RealBall::zero(p);
    for b in 1..=n {
        let ratio = RealBall::from_rational(&Rational::from((n, b)), p);
        let term = if *alpha == 1 {
            ratio
        } else if b == n {
            RealBall::one(p)
        } else {
            ratio.pow(&a).expect("ratio is positive")
        };
        exact = exact.add(&term);
    }
    let nb = RealBall::from_u64(n, p);
    let (branch, prediction) = if *alpha == 1 {
        let ln = nb.ln().expect("N >= 1");
        ("log", nb.mul(&ln))
    } else {
        let first = nb
            .div(&RealBall::from_rational(&(Rational::from(1) - alpha), p))
            .expect("alpha != 1");
        let na = if n == 1 {
            RealBall::one(p)
        } else {
            nb.pow(&a).expect("N > 0")
        };
        ("zeta", first.add(&zeta(alpha, p)?.mul(&na)))
    };
    Ok(PartialSum {
        alpha: alpha.to_string(),
        n,
        branch: branch.to_string(),
        difference: exact.sub(&prediction),
        exact,
        prediction,
    })
}

/// Divisor counts `sigma_0(k)` for `k <= limit` by a linear sieve.
pub fn divisor_counts(limit: usize) -> Vec<u32> {
    let mut d = vec![0u32; limit + 1];
    // exponent of the least prime factor
    let mut e = vec![0u8; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    if limit >= 1 {
        d[1] = 1;
    }
    for i in 2..=limit {
        if d[i] == 0 {
            primes.push(i);
            d[i] = 2;
            e[i] = 1;
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&v| v <= limit) else {
                break;
            };
            if i % p == 0 {
                e[ip] = e[i] + 1;
                d[ip] = d[i] / (e[i] as u32 + 1) * (e[ip] as u32 + 1);
                break;
            }
            e[ip] = 1;
            d[ip] = d[i] * 2;
        }
    }
    d
}

/// `sum over k <= 2N^2 of sigma_0(k)^2`.
pub fn divisor_second_moment(n: u64) -> Result<u64, RationalError> {
    let limit = 2u64
        .checked_mul(n * n)
        .filter(|&l| l <= 1 << 32)
        .ok_or_else(|| RationalError::InvalidInput("2N^2 is too large to sieve".into()))?;
    Ok(divisor_counts(limit as usize)
        .iter()
        .skip(1)
        .map(|&d| (d as u64) * (d as u64))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_naive() {
        let d = divisor_counts(500);
        for (k, &dk) in d.iter().enumerate().skip(1) {
            let naive = (1..=k).filter(|j| k % j == 0).count() as u32;
            assert_eq!(dk, naive, "k = {k}");
        }
        assert_eq!(divisor_second_moment(1).unwrap(), 5);
    }

    #[test]
    fn zeta_values() {
        let z = zeta(&Rational::from((3, 2)), 128).unwrap();
        assert!((z.mid_f64() - 2.612375348685488).abs() < 1e-14);
        let z2 = zeta(&Rational::from(2), 128).unwrap();
        let pi2 = RealBall::pi(128).pow_u32(2).div(&RealBall::from_u64(6, 128)).unwrap();
        assert!(z2.overlaps(&pi2));
    }

    #[test]
    fn partial_sum_examples() {
        let s = partial_sum(&Rational::from(1), 1000).unwrap();
        assert!((s.exact.mid_f64() - 7485.470860550345).abs() < 1e-6);
        assert!((s.difference.mid_f64() - 577.7).abs() < 1.0);
        let s = partial_sum(&Rational::from(2), 1).unwrap();
        assert_eq!(s.exact.mid_f64(), 1.0);
        assert!((s.prediction.mid_f64() - 0.6449340668).abs() < 1e-9);
    }
}
