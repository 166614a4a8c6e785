//! Exact zero tests for `sum coeff_i x_i^c` when `c` is rational or a
//! logarithm of an algebraic number.

use std::collections::BTreeMap;

use num_prime::nt_funcs::factorize64;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use super::exponent::{AlgebraicLog, Exponent};
use super::poly::Poly;

/// Why two sums were certified equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityWitness {
    /// The terms cancel after combining like powers.
    Syntactic,
    /// Grouping `x = s^q t` by the `q`-th-power-free part `t` cancels every group.
    SurdStructure,
    /// Every group polynomial vanishes at the algebraic number.
    MinimalPolynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactOutcome {
    Zero(EqualityWitness),
    NonZero,
}

/// Splits `x = s^q t` with `t` free of `q`-th powers.
pub fn qth_power_free(x: u64, q: u64) -> (Integer, u64) {
    if q == 1 || x <= 1 {
        return (Integer::from(x), 1);
    }
    let mut s = Integer::from(1);
    let mut t: u64 = 1;
    for (p, e) in factorize64(x) {
        let e = e as u64;
        s *= Integer::from(p).pow((e / q) as u32);
        t *= p.pow((e % q) as u32);
    }
    (s, t)
}

/// Splits `x = base^j k` with `base` not dividing `k`.
pub fn base_split(mut x: u64, base: u64) -> (usize, u64) {
    let mut j = 0;
    while x % base == 0 {
        x /= base;
        j += 1;
    }
    (j, x)
}

/// Exact decision for `sum coeff x^c = 0`. Terms must have distinct `x >= 1`
/// and nonzero coefficients. `None` means no exact argument applies.
pub fn exact_zero_test(terms: &[(Integer, u64)], c: &Exponent) -> Option<ExactOutcome> {
    if terms.is_empty() {
        return Some(ExactOutcome::Zero(EqualityWitness::Syntactic));
    }
    match c {
        Exponent::Rational(r) => Some(rational_route(terms, r.numer(), r.denom())),
        Exponent::AlgebraicLog(l) => algebraic_route(terms, l),
        _ => None,
    }
}

/// `x^(a/q) = s^a t^(a/q)`; the numbers `t^(a/q)` for distinct `q`-th-power-free
/// `t` are linearly independent over the rationals, so the sum vanishes
/// exactly when every group does.
fn rational_route(terms: &[(Integer, u64)], a: i64, q: u64) -> ExactOutcome {
    if a == 0 {
        let total: Integer = terms.iter().map(|(k, _)| k).sum();
        return if total == 0 {
            ExactOutcome::Zero(EqualityWitness::SurdStructure)
        } else {
            ExactOutcome::NonZero
        };
    }
    let mut groups: BTreeMap<u64, Rational> = BTreeMap::new();
    for (k, x) in terms {
        let (s, t) = qth_power_free(*x, q);
        let sa = if a > 0 {
            Rational::from(s.pow(a as u32))
        } else {
            Rational::from((Integer::from(1), s.pow((-a) as u32)))
        };
        *groups.entry(t).or_default() += sa * k;
    }
    if groups.values().all(|v| *v == 0) {
        ExactOutcome::Zero(EqualityWitness::SurdStructure)
    } else {
        ExactOutcome::NonZero
    }
}

/// With `x = base^j k`, `x^c = phi^j k^c`; group by `k` into polynomials in `phi`.
fn algebraic_route(terms: &[(Integer, u64)], l: &AlgebraicLog) -> Option<ExactOutcome> {
    let mut groups: BTreeMap<u64, BTreeMap<usize, Integer>> = BTreeMap::new();
    for (coeff, x) in terms {
        let (j, k) = base_split(*x, l.base());
        *groups.entry(k).or_default().entry(j).or_default() += coeff;
    }
    let mut nonzero = 0;
    for g in groups.values() {
        let deg = g.keys().max().copied().unwrap_or(0);
        let mut coeffs = vec![Integer::new(); deg + 1];
        for (j, k) in g {
            coeffs[*j] += k;
        }
        let p = Poly::from_integers_low_first(&coeffs);
        if !l.is_root_of(&p) {
            nonzero += 1;
        }
    }
    match nonzero {
        0 => Some(ExactOutcome::Zero(EqualityWitness::MinimalPolynomial)),
        // a single group k^c P(phi) with P(phi) != 0
        1 => Some(ExactOutcome::NonZero),
        _ => None,
    }
}
