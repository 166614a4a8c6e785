//! Explicit threshold and lower-bound functions, evaluated on logarithms.
//!
//! Every function returns the bound as a [`LogMagnitude`]; the bounds are
//! far below the smallest float, so only their logarithms are computed.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::realcore::{LogMagnitude, RealBall, RealError, Scalar, PLAIN_LIMIT_BITS};

/// Working precision of the bound calculus.
pub const BOUND_PREC: u32 = 128;

/// `base^e` as a scalar, exact while it has at most 4096 bits.
fn int_pow(base: u64, e: u64, prec: u32) -> Result<Scalar, RealError> {
    if base <= 1 || e == 0 {
        let v = if e == 0 { 1 } else { base };
        return Ok(Scalar::from_integer(&Integer::from(v), prec));
    }
    let bits = (64 - base.leading_zeros() as u64).saturating_mul(e);
    if bits <= PLAIN_LIMIT_BITS as u64 + 64 {
        return Ok(Scalar::from_integer(&Integer::from(base).pow(e as u32), prec));
    }
    let ln = RealBall::from_u64(base, prec).ln().expect("base >= 2");
    let e = Scalar::from_integer(&Integer::from(e), prec);
    Ok(e.mul_ball(&ln)?.exp())
}

fn ln_u64(x: u64, prec: u32) -> RealBall {
    RealBall::from_u64(x, prec).ln().expect("argument >= 1")
}

fn int(x: u64, prec: u32) -> Scalar {
    Scalar::from_integer(&Integer::from(x), prec)
}

fn require(cond: bool, msg: &str) -> Result<(), RealError> {
    if cond {
        Ok(())
    } else {
        Err(RealError::OutOfRange(msg.into()))
    }
}

/// `log(1/psi) = 2^(600 s^4) max{c8, q^s, s, log A, log N}^(50 s^2)` for a
/// symbolic `q`.
pub fn psi_neg_log_scalar(a: u64, n: u64, s: u32, q: &Scalar, c8: &RealBall, prec: u32) -> Result<Scalar, RealError> {
    require(a >= 1 && n >= 1 && s >= 1, "psi needs A, N, s >= 1")?;
    let s64 = s as u64;
    let q_s = q.pow_u64(s64)?;
    let candidates = [
        Scalar::Plain(c8.clone()),
        q_s,
        int(s64, prec),
        Scalar::Plain(ln_u64(a, prec)),
        Scalar::Plain(ln_u64(n, prec)),
    ];
    let m = candidates[1..]
        .iter()
        .fold(candidates[0].clone(), |acc, x| acc.max_enclosure(x));
    let lead = int_pow(2, 600 * s64.pow(4), prec)?;
    Ok(lead.mul(&m.pow_u64(50 * s64 * s64)?)?)
}

/// `psi_N(q) = exp(-2^(600 s^4) max{c8, q^s, s, log A, log N}^(50 s^2))`.
pub fn psi_log(a: u64, n: u64, s: u32, q: u64, c8: &RealBall) -> Result<LogMagnitude, RealError> {
    require(q >= 1, "psi needs q >= 1")?;
    let q = int(q, BOUND_PREC);
    let l = psi_neg_log_scalar(a, n, s, &q, c8, BOUND_PREC)?;
    Ok(LogMagnitude::positive(l.neg()))
}

/// `exp(-(16m)^(2(m+2)) (log N)^m)`.
pub fn baker_wustholz_log(m: u64, n: &RealBall) -> Result<LogMagnitude, RealError> {
    require(m >= 1, "m must be positive")?;
    let ln_n = n
        .ln()
        .ok_or_else(|| RealError::OutOfRange("N must be positive".into()))?;
    let lead = int_pow(16 * m, 2 * (m + 2), BOUND_PREC)?;
    let l = lead.mul(&Scalar::Plain(ln_n).pow_u64(m)?)?;
    Ok(LogMagnitude::positive(l.neg()))
}

/// `c_0(m, N) = m^-1 (log N)^-2 exp(-(16m)^(2(m+2)) (log N)^m)`.
pub fn c0_log(m: u64, n: &RealBall) -> Result<LogMagnitude, RealError> {
    let bw = baker_wustholz_log(m, n)?;
    let ln_n = n
        .ln()
        .ok_or_else(|| RealError::OutOfRange("N must be positive".into()))?;
    let lnln = ln_n
        .ln()
        .ok_or_else(|| RealError::OutOfRange("c0 needs N > 1".into()))?;
    let extra = ln_u64(m, BOUND_PREC).add(&lnln.mul_i64(2)).neg();
    Ok(LogMagnitude::positive(bw.log_value.add(&Scalar::Plain(extra))?))
}

/// `m^(-q^m) N^(r(1 - q^m) - c) (log N)^-1` with `r = a/q`.
pub fn rational_threshold_log(m: u64, n: u64, a: i64, q: u64, c: &RealBall) -> Result<LogMagnitude, RealError> {
    require(m >= 1 && n >= 2 && q >= 1, "needs m >= 1, N >= 2, q >= 1")?;
    let p = BOUND_PREC;
    let q_m = int_pow(q, m, p)?;
    let r = RealBall::from_rational(&Rational::from((a, q)), p);
    let ln_n = ln_u64(n, p);
    let one_minus = int(1, p).sub(&q_m)?;
    let t1 = q_m.mul_ball(&ln_u64(m, p))?.neg();
    let t2 = one_minus
        .mul_ball(&r)?
        .sub(&Scalar::Plain(c.clone()))?
        .mul_ball(&ln_n)?;
    let t3 = Scalar::Plain(ln_n.ln().expect("N >= 2").neg());
    Ok(LogMagnitude::positive(t1.add(&t2)?.add(&t3)?))
}

/// `(m N^r)^(1 - q^m)`, the lower bound for a nonzero conjugate product.
pub fn alpha_lower_log(m: u64, n: u64, r: &Rational, q: u64) -> Result<LogMagnitude, RealError> {
    require(m >= 1 && n >= 1 && q >= 1, "needs m, N, q >= 1")?;
    let p = BOUND_PREC;
    let base = ln_u64(m, p).add(&RealBall::from_rational(r, p).mul(&ln_u64(n, p)));
    let e = int(1, p).sub(&int_pow(q, m, p)?)?;
    Ok(LogMagnitude::positive(e.mul_ball(&base)?))
}

/// `exp(-2(1 + c) q^(2N))`.
pub fn prime_corollary_log(c: &RealBall, q: u64, n: u64) -> Result<LogMagnitude, RealError> {
    require(q >= 1 && n >= 1, "needs q, N >= 1")?;
    let p = BOUND_PREC;
    let factor = RealBall::one(p).add(c).mul_i64(-2);
    Ok(LogMagnitude::positive(int_pow(q, 2 * n, p)?.mul_ball(&factor)?))
}

/// Number of primes up to `n`.
pub fn prime_pi(n: u64) -> u64 {
    if n < 2 {
        return 0;
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().filter(|&&b| b).count() as u64
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryChain {
    pub m: u64,
    pub threshold_log: String,
    pub corollary_log: String,
    /// Whether the prime-set threshold dominates the corollary's weakening.
    pub holds: Option<bool>,
}

/// Compares the threshold with `m = pi(N)` against the corollary's bound.
pub fn corollary_chain(a: i64, q: u64, n: u64, c: &RealBall) -> Result<CorollaryChain, RealError> {
    let m = prime_pi(n).max(1);
    let t = rational_threshold_log(m, n.max(2), a, q, c)?;
    let k = prime_corollary_log(c, q, n)?;
    let holds = t.cmp_certified(&k).map(|o| o != Ordering::Less);
    Ok(CorollaryChain {
        m,
        threshold_log: t.log_value.describe(20),
        corollary_log: k.log_value.describe(20),
        holds,
    })
}

/// Logarithm of Fel'dman's constant `B`, with `m = s`, `n = q^s`,
/// `H_0 = 2 A^q N^a`, `h = 2N` and `c = log c3`; the bound is `|Lambda| > exp(-B)`.
pub fn feldman_log_bound(s: u64, q: u64, a_max: u64, n: u64, a: u64, c3: &RealBall) -> Result<LogMagnitude, RealError> {
    require(s >= 1 && q >= 1 && a_max >= 1 && n >= 1, "needs s, q, A, N >= 1")?;
    let p = BOUND_PREC;
    let ln_c3 = c3
        .ln()
        .filter(|l| l.is_positive())
        .ok_or_else(|| RealError::OutOfRange("c3 must exceed 1".into()))?;
    let m = s;
    let ln_q = ln_u64(q, p);
    let nn = int_pow(q, s, p)?;
    let ln_nn = Scalar::Plain(ln_q.mul_i64(s as i64));
    let ln_h0 = ln_u64(2, p)
        .add(&ln_u64(a_max, p).mul_i64(q as i64))
        .add(&ln_u64(n, p).mul_i64(a as i64));
    let ln_h = ln_u64(2 * n, p);
    let e = 12 * m * m + 4 * m - 3;
    // log of 4^(6m^2-2m+1) n^(1/2) (c + log h)
    let inner_log = Scalar::Plain(ln_u64(4, p).mul_i64((6 * m * m - 2 * m + 1) as i64))
        .add(&ln_nn.mul_ball(&RealBall::from_rational(&Rational::from((1, 2)), p))?)?
        .add(&Scalar::Plain(ln_c3.add(&ln_h).ln().expect("positive")))?;
    let log_b = ln_nn
        .add(&nn.add(&Scalar::Plain(ln_h0))?.ln()?)?
        .add(&inner_log.mul(&int(e, p))?)?;
    Ok(LogMagnitude::positive(log_b.exp().neg()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> RealBall {
        RealBall::one(BOUND_PREC)
    }

    #[test]
    fn psi_base_case_is_exact() {
        let v = psi_log(1, 2, 1, 1, &one()).unwrap();
        let want = -(Integer::from(1) << 600u32);
        assert_eq!(v.log_value.to_exact_integer(), Some(want.clone()));
        assert_eq!(want.to_string().len(), 182); // sign plus 181 digits
    }

    #[test]
    fn psi_s2_is_a_tower() {
        let v = psi_log(1, 1, 2, 1, &one()).unwrap();
        assert!(v.is_tower());
    }

    #[test]
    fn psi_decreases_in_q() {
        let a = psi_log(3, 5, 1, 2, &one()).unwrap();
        let b = psi_log(3, 5, 1, 1, &one()).unwrap();
        assert_eq!(a.cmp_certified(&b), Some(Ordering::Less));
    }

    #[test]
    fn baker_wustholz_values() {
        let e = RealBall::one(BOUND_PREC).exp();
        let v = baker_wustholz_log(1, &e).unwrap();
        let got = v.log_value.as_plain().unwrap().mid_f64();
        assert!((got + 16777216.0).abs() < 1e-6);
        let v = baker_wustholz_log(2, &RealBall::from_u64(10, BOUND_PREC)).unwrap();
        let want = -(32f64.powi(8)) * 10f64.ln().powi(2);
        let got = v.log_value.as_plain().unwrap().mid_f64();
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn c0_below_baker_wustholz() {
        for n in [16u64, 100, 1000] {
            let nb = RealBall::from_u64(n, BOUND_PREC);
            let c0 = c0_log(2, &nb).unwrap();
            let bw = baker_wustholz_log(2, &nb).unwrap();
            assert_eq!(c0.cmp_certified(&bw), Some(Ordering::Less));
        }
    }

    #[test]
    fn rational_threshold_example() {
        let c = RealBall::from_rational(&Rational::from((1, 2)), BOUND_PREC);
        let v = rational_threshold_log(1, 2, 1, 2, &c).unwrap();
        let want = -(2f64.ln()) - 2f64.ln().ln();
        assert!((v.log_value.as_plain().unwrap().mid_f64() - want).abs() < 1e-12);
        let al = alpha_lower_log(1, 2, &Rational::from((1, 2)), 2).unwrap();
        assert!((al.log_value.as_plain().unwrap().mid_f64() + 2f64.ln() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn corollary_chain_small_case() {
        let c = RealBall::from_rational(&Rational::from((1, 2)), BOUND_PREC);
        let chain = corollary_chain(1, 2, 3, &c).unwrap();
        assert_eq!(chain.m, 2);
        assert_eq!(chain.holds, Some(true));
        let k = prime_corollary_log(&c, 2, 3).unwrap();
        assert!((k.log_value.as_plain().unwrap().mid_f64() + 192.0).abs() < 1e-9);
    }

    #[test]
    fn feldman_base_case() {
        let e = RealBall::one(BOUND_PREC).exp();
        let v = feldman_log_bound(1, 1, 1, 2, 1, &e).unwrap();
        let l4 = 4f64.ln();
        let want = (1.0 + l4) * (1024.0 * (1.0 + l4)).powi(13);
        let got = -v.log_value.as_plain().unwrap().mid_f64();
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn prime_counting() {
        assert_eq!(prime_pi(1), 0);
        assert_eq!(prime_pi(3), 2);
        assert_eq!(prime_pi(100), 25);
    }
}
