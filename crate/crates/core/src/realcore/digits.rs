//! Exponents `c = sum radix^(-d_n)` given by a rule for the digit positions
//! `d_1 < d_2 < ...`, with positions beyond float range kept symbolic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use super::ball::{RealBall, RADIUS_PREC};
use super::error::RealError;
use super::exponent::parse_rational;
use super::magnitude::{Scalar, PLAIN_LIMIT_BITS};
use crate::dissociation::bounds::psi_neg_log_scalar;

/// Positions nested deeper than this are not produced.
pub const TOWER_DEPTH_LIMIT: usize = 4;

const MAX_POSITION_PREC: u32 = 1 << 16;

/// A digit position: an explicit integer, an exact power whose exponent is
/// itself a position, or the ceiling of a value known only as a tower.
#[derive(Debug, Clone, PartialEq)]
pub enum Position {
    Exact(Integer),
    /// `base^(mul * inner + add)`
    Power {
        base: u64,
        mul: Integer,
        inner: Box<Position>,
        add: Integer,
    },
    /// Least integer `>= value`.
    CeilOf(Scalar),
}

impl Position {
    /// Height of the representation: an integer is 1, `b^integer` is 2.
    pub fn depth(&self) -> usize {
        match self {
            Position::Exact(_) => 1,
            Position::Power { inner, .. } => 1 + inner.depth(),
            Position::CeilOf(s) => 1 + s.depth(),
        }
    }

    pub fn as_exact(&self) -> Option<&Integer> {
        match self {
            Position::Exact(d) => Some(d),
            _ => None,
        }
    }

    /// Enclosure of the position's value.
    pub fn to_scalar(&self, prec: u32) -> Result<Scalar, RealError> {
        match self {
            Position::Exact(d) => Ok(Scalar::from_integer(d, prec)),
            Position::Power { base, mul, inner, add } => {
                let e = inner
                    .to_scalar(prec)?
                    .mul(&Scalar::from_integer(mul, prec))?
                    .add(&Scalar::from_integer(add, prec))?;
                let ln_b = RealBall::from_u64(*base, prec).ln().expect("base >= 2");
                Ok(e.mul_ball(&ln_b)?.exp())
            }
            Position::CeilOf(s) => {
                let unit = RealBall::from_interval(&Float::with_val(prec, 0), &Float::with_val(prec, 1), prec);
                Ok(s.add(&Scalar::Plain(unit))?)
            }
        }
    }

    /// Certified comparison with an integer; `None` when undecidable at the
    /// available precision.
    pub fn cmp_integer(&self, p: &Integer) -> Option<Ordering> {
        match self {
            Position::Exact(d) => Some(d.cmp(p)),
            Position::Power { base, mul, inner, add } => {
                let ps = Scalar::from_integer(p, 256);
                if let Ok(v) = self.to_scalar(256) {
                    if let Some(o) = v.cmp_certified(&ps) {
                        return Some(o);
                    }
                }
                let e = Integer::from(mul * inner.as_exact()?) + add;
                let bits = e.to_u64()?.checked_mul(64 - base.leading_zeros() as u64)?;
                if bits > p.significant_bits() as u64 + 64 {
                    return Some(Ordering::Greater);
                }
                let v = Integer::from(*base).pow(e.to_u32()?);
                Some(v.cmp(p))
            }
            Position::CeilOf(s) => {
                let ps = Scalar::from_integer(p, 256);
                if s.cmp_certified(&ps) == Some(Ordering::Greater) {
                    return Some(Ordering::Greater);
                }
                let one = Scalar::from_i64(1, 256);
                let plus = s.add(&one).ok()?;
                (plus.cmp_certified(&ps) == Some(Ordering::Less)).then_some(Ordering::Less)
            }
        }
    }

    /// Number of decimal digits of an exact position.
    pub fn decimal_digits(&self) -> Option<usize> {
        self.as_exact().map(|d| d.to_string().trim_start_matches('-').len())
    }

    pub fn describe(&self) -> String {
        match self {
            Position::Exact(d) => d.to_string(),
            Position::Power { base, mul, inner, add } => {
                format!("{base}^({mul}*{}+{add})", inner.describe())
            }
            Position::CeilOf(s) => format!("ceil({})", s.describe(20)),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            form: &'static str,
            value: String,
            depth: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            decimal_digits: Option<usize>,
        }
        Repr {
            form: match self {
                Position::Exact(_) => "exact",
                Position::Power { .. } => "power",
                Position::CeilOf(_) => "ceil_of",
            },
            value: self.describe(),
            depth: self.depth(),
            decimal_digits: self.decimal_digits(),
        }
        .serialize(s)
    }
}

/// `log(1/psi_n(q))` for the threshold families driving the construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdFamily {
    /// `n + q`
    ToySum,
    /// `n * q^2`
    ToyProduct,
    /// `2^(600 s^4) max{c8, q^s, s, log A, log N}^(50 s^2)`
    Psi { a: u64, n: u64, s: u32, c8: Rational },
}

impl ThresholdFamily {
    pub fn is_toy(&self) -> bool {
        matches!(self, ThresholdFamily::ToySum | ThresholdFamily::ToyProduct)
    }

    pub fn neg_log(&self, stage: u64, q: &Scalar, prec: u32) -> Result<Scalar, RealError> {
        let n = Scalar::from_integer(&Integer::from(stage), prec);
        Ok(match self {
            ThresholdFamily::ToySum => n.add(q)?,
            ThresholdFamily::ToyProduct => n.mul(&q.mul(q)?)?,
            ThresholdFamily::Psi { a, n: big_n, s, c8 } => {
                let c8 = RealBall::from_rational(c8, prec);
                psi_neg_log_scalar(*a, *big_n, *s, q, &c8, prec)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DigitRule {
    /// A finite prefix of the positions.
    Explicit(Vec<u64>),
    /// `d_(n+1) = 100^(1 + n d_n)`
    Corollary { d1: u64 },
    /// `d_(n+1)` least with `radix^d >= radix / psi_n(radix^(d_n)) + k`,
    /// and `d_(n+1) > d_n`.
    Threshold { family: ThresholdFamily, d1: u64, k: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DigitSequence {
    radix: u32,
    rule: DigitRule,
}

/// Answer to a digit query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "digit", rename_all = "snake_case")]
pub enum DigitAnswer {
    Zero,
    One,
    Unknown { reason: String },
}

impl DigitSequence {
    pub fn new(radix: u32, rule: DigitRule) -> Result<Self, RealError> {
        if radix < 2 {
            return Err(RealError::InvalidExponent("radix must be at least 2".into()));
        }
        match &rule {
            DigitRule::Explicit(v) => {
                if v.is_empty() || v[0] == 0 || v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(RealError::InvalidExponent(
                        "positions must be positive and strictly increasing".into(),
                    ));
                }
            }
            DigitRule::Corollary { d1 } | DigitRule::Threshold { d1, .. } if *d1 == 0 => {
                return Err(RealError::InvalidExponent("d1 must be positive".into()));
            }
            DigitRule::Threshold {
                family: ThresholdFamily::Psi { a, n, s, c8 },
                ..
            } if *a == 0 || *n == 0 || *s == 0 || *c8 < 1 => {
                return Err(RealError::InvalidExponent("psi parameters must be at least 1".into()));
            }
            _ => {}
        }
        Ok(DigitSequence { radix, rule })
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn rule(&self) -> &DigitRule {
        &self.rule
    }

    pub fn positions(&self) -> PositionIter<'_> {
        PositionIter {
            seq: self,
            last: None,
            index: 0,
            done: false,
        }
    }

    /// Up to `count` positions, with the error that stopped the sequence early.
    pub fn take_positions(&self, count: usize) -> (Vec<Position>, Option<RealError>) {
        let mut out = Vec::new();
        for item in self.positions().take(count) {
            match item {
                Ok(p) => out.push(p),
                Err(e) => return (out, Some(e)),
            }
        }
        (out, None)
    }

    /// Enclosure of `c` with absolute radius at most about `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> Result<RealBall, RealError> {
        let log_r = 31 - self.radix.leading_zeros() as u64; // radix >= 2^log_r
        let r = Integer::from(self.radix);
        let mut sum = Rational::new();
        for item in self.positions() {
            let pos = item.map_err(|_| RealError::TailUnbounded { precision: prec })?;
            let d = match pos.as_exact().and_then(|d| d.to_u64()) {
                Some(d) => d,
                None => {
                    // beyond 2^4096: the whole tail is negligible
                    let rad = Float::with_val(RADIUS_PREC, 1) >> prec;
                    return Ok(RealBall::from_rational(&sum, prec).widen(&rad));
                }
            };
            // tail from here on is at most radix^(1-d) <= 2^(-(d-1) log_r)
            if (d - 1).saturating_mul(log_r) >= prec as u64 {
                let shift = u32::try_from((d - 1) * log_r).unwrap_or(u32::MAX).min(1 << 30);
                let rad = Float::with_val(RADIUS_PREC, 1) >> shift;
                return Ok(RealBall::from_rational(&sum, prec).widen(&rad));
            }
            sum += Rational::from((1, r.clone().pow(d as u32)));
        }
        Err(RealError::TailUnbounded { precision: prec })
    }

    pub fn digit(&self, position: &Integer) -> DigitAnswer {
        if *position <= 0 {
            return DigitAnswer::Zero;
        }
        for item in self.positions() {
            match item {
                Err(e) => return DigitAnswer::Unknown { reason: e.to_string() },
                Ok(d) => match d.cmp_integer(position) {
                    Some(Ordering::Less) => continue,
                    Some(Ordering::Equal) => return DigitAnswer::One,
                    Some(Ordering::Greater) => return DigitAnswer::Zero,
                    None => {
                        return DigitAnswer::Unknown {
                            reason: format!("position {} not comparable", d.describe()),
                        }
                    }
                },
            }
        }
        DigitAnswer::Unknown {
            reason: "beyond the listed positions".into(),
        }
    }

    fn next_position(&self, index: usize, last: Option<&Position>) -> Result<Option<Position>, RealError> {
        match (&self.rule, last) {
            (DigitRule::Explicit(v), _) => Ok(v.get(index).map(|&d| Position::Exact(Integer::from(d)))),
            (DigitRule::Corollary { d1 }, None) | (DigitRule::Threshold { d1, .. }, None) => {
                Ok(Some(Position::Exact(Integer::from(*d1))))
            }
            (DigitRule::Corollary { .. }, Some(prev)) => Ok(Some(corollary_step(index as u64, prev))),
            (DigitRule::Threshold { family, k, .. }, Some(prev)) => {
                threshold_step(family, self.radix, index as u64, prev, *k).map(Some)
            }
        }
    }
}

/// `d_(n+1) = 100^(1 + n d_n)`, materialised while it fits in 4096 bits.
fn corollary_step(n: u64, prev: &Position) -> Position {
    if let Some(d) = prev.as_exact() {
        let e = Integer::from(d * n) + 1u32;
        // log2(100) < 6.65
        if e <= (PLAIN_LIMIT_BITS as u64 * 100 / 665) {
            return Position::Exact(Integer::from(100u32).pow(e.to_u32().expect("small exponent")));
        }
    }
    Position::Power {
        base: 100,
        mul: Integer::from(n),
        inner: Box::new(prev.clone()),
        add: Integer::from(1),
    }
}

/// `radix^d` as a scalar, exact while it fits in 4096 bits.
fn radix_power(radix: u32, d: &Position, prec: u32) -> Result<Scalar, RealError> {
    if let Some(e) = d.as_exact() {
        let bits = e
            .to_u64()
            .and_then(|e| e.checked_mul(32 - radix.leading_zeros() as u64));
        if let Some(b) = bits {
            if b <= PLAIN_LIMIT_BITS as u64 {
                let v = Integer::from(radix).pow(e.to_u32().expect("small"));
                return Ok(Scalar::from_integer(&v, prec));
            }
        }
    }
    let ln_r = RealBall::from_u64(radix as u64, prec).ln().expect("radix >= 2");
    Ok(d.to_scalar(prec)?.mul_ball(&ln_r)?.exp())
}

/// Least `x` with `radix^x >= radix * exp(L) + k`, as an enclosure.
fn threshold_exponent(l: &Scalar, radix: u32, k: u64, prec: u32) -> Result<Scalar, RealError> {
    let ln_r = RealBall::from_u64(radix as u64, prec).ln().expect("radix >= 2");
    // log(R e^L + k) = L + log R + log(1 + k e^-L / R), the last term in [0, k e^-L / R]
    let delta = match l {
        Scalar::Plain(b) => {
            let e = RealBall::from_interval(&b.lower(), &b.lower(), prec).neg().exp();
            e.mul_i64(k as i64)
                .div(&RealBall::from_u64(radix as u64, prec))
                .expect("radix > 0")
                .upper()
        }
        Scalar::Tower { negative: false, .. } => Float::with_val(RADIUS_PREC, 1) >> 1_000_000u32,
        Scalar::Tower { negative: true, .. } => {
            return Err(RealError::OutOfRange("threshold logarithm is negative".into()))
        }
    };
    let zero = Float::new(prec);
    let slack = RealBall::from_interval(&zero, &delta, prec);
    let num = l.add(&Scalar::Plain(ln_r.clone()))?.add(&Scalar::Plain(slack))?;
    Ok(num.div(&Scalar::Plain(ln_r))?)
}

fn threshold_step(
    family: &ThresholdFamily,
    radix: u32,
    n: u64,
    prev: &Position,
    k: u64,
) -> Result<Position, RealError> {
    let mut prec = 256u32;
    loop {
        let q = radix_power(radix, prev, prec)?;
        let l = family.neg_log(n, &q, prec)?;
        let x = threshold_exponent(&l, radix, k, prec)?;
        match &x {
            Scalar::Plain(b) => {
                if let Some(c) = b.ceil_certified() {
                    let next = match prev.as_exact() {
                        Some(d) if c <= *d => Integer::from(d + 1u32),
                        _ => c,
                    };
                    return Ok(Position::Exact(next));
                }
                let needed = b.mid().get_exp().unwrap_or(0).max(0) as u32 + 64;
                prec = if needed > prec {
                    needed.next_power_of_two()
                } else {
                    prec * 2
                };
                if prec > MAX_POSITION_PREC {
                    return Err(RealError::PrecisionExhausted(MAX_POSITION_PREC));
                }
            }
            Scalar::Tower { .. } => return Ok(Position::CeilOf(x)),
        }
    }
}

pub struct PositionIter<'a> {
    seq: &'a DigitSequence,
    last: Option<Position>,
    index: usize,
    done: bool,
}

impl Iterator for PositionIter<'_> {
    type Item = Result<Position, RealError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.seq.next_position(self.index, self.last.as_ref()) {
            Ok(Some(p)) => {
                if p.depth() > TOWER_DEPTH_LIMIT {
                    self.done = true;
                    return Some(Err(RealError::DepthExceeded {
                        limit: TOWER_DEPTH_LIMIT,
                        computed: self.index,
                    }));
                }
                self.index += 1;
                self.last = Some(p.clone());
                Some(Ok(p))
            }
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                // past a position at the depth limit the next one is deeper still
                if self.last.as_ref().is_some_and(|p| p.depth() >= TOWER_DEPTH_LIMIT) {
                    return Some(Err(RealError::DepthExceeded {
                        limit: TOWER_DEPTH_LIMIT,
                        computed: self.index,
                    }));
                }
                Some(Err(e))
            }
        }
    }
}

/// Check of one stage of the approximation `|c - a_n/q_n| < psi_n(q_n)`.
#[derive(Debug, Clone, Serialize)]
pub struct StageCheck {
    pub stage: usize,
    /// `(1 - d_(n+1)) log radix`, the log of the tail bound
    pub log_error_bound: String,
    /// `log psi_n(q_n)`
    pub log_target: String,
    /// The inequality certified on logarithms.
    pub symbolic: bool,
    /// `d_(n+1)` is the ceiling of a tower enclosing the least admissible
    /// exponent recomputed from `d_n`, so the inequality holds by definition.
    pub by_construction: bool,
    /// The inequality certified on the actual tail enclosure, when representable.
    pub numeric: Option<bool>,
}

/// Verifies every stage `n < positions.len()` of a threshold-rule sequence.
pub fn verify_stages(seq: &DigitSequence, positions: &[Position], prec: u32) -> Result<Vec<StageCheck>, RealError> {
    let (family, k) = match &seq.rule {
        DigitRule::Threshold { family, k, .. } => (family, *k),
        _ => return Ok(Vec::new()),
    };
    let radix = seq.radix;
    let ln_r = RealBall::from_u64(radix as u64, prec).ln().expect("radix >= 2");
    let mut out = Vec::new();
    for n in 1..positions.len() {
        let q = radix_power(radix, &positions[n - 1], prec)?;
        let l = family.neg_log(n as u64, &q, prec)?;
        let target = l.neg();
        let next = positions[n].to_scalar(prec)?;
        let one = Scalar::from_i64(1, prec);
        let bound = one.sub(&next)?.mul_ball(&ln_r)?;
        let symbolic = bound.cmp_certified(&target) == Some(Ordering::Less);
        let by_construction = match &positions[n] {
            Position::CeilOf(x) => {
                let fresh = threshold_exponent(&l, radix, k, prec)?;
                fresh.is_tower() && x.cmp_certified(&fresh).is_none()
            }
            _ => false,
        };
        let numeric = numeric_stage_check(radix, positions, n, &l, prec);
        out.push(StageCheck {
            stage: n,
            log_error_bound: bound.describe(24),
            log_target: target.describe(24),
            symbolic,
            by_construction,
            numeric,
        });
    }
    Ok(out)
}

/// Direct comparison of the tail `sum_(j>n) radix^-d_j` with `exp(-L)`.
fn numeric_stage_check(radix: u32, positions: &[Position], n: usize, l: &Scalar, prec: u32) -> Option<bool> {
    const LIMIT: u64 = 200_000;
    let l = l.as_plain()?;
    if l.upper() > LIMIT as f64 {
        return None;
    }
    let d_next = positions[n].as_exact()?.to_u64().filter(|&d| d <= LIMIT)?;
    let r = Integer::from(radix);
    let term = Rational::from((1, r.clone().pow(d_next as u32)));
    let rest_upper = match positions.get(n + 1) {
        Some(Position::Exact(d)) if *d <= LIMIT => {
            let d = d.to_u32().expect("small");
            Rational::from((r.clone(), r.clone().pow(d)))
        }
        Some(_) => Rational::from((1, Integer::from(1) << 1_000_000u32)),
        None => Rational::from((r.clone(), r.clone().pow(d_next as u32))) - &term,
    };
    let lo = RealBall::from_rational(&term, prec).lower();
    let hi = RealBall::from_rational(&(term + rest_upper), prec).upper();
    let tail = RealBall::from_interval(&lo, &hi, prec);
    let target = l.neg().exp();
    Some(tail.cmp_certified(&target) == Some(Ordering::Less))
}

fn fmt_q(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for DigitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "digits:{}:", self.radix)?;
        match &self.rule {
            DigitRule::Explicit(v) => {
                let s: Vec<String> = v.iter().map(|d| d.to_string()).collect();
                write!(f, "list:{}", s.join(","))
            }
            DigitRule::Corollary { d1 } => write!(f, "corollary:{d1}"),
            DigitRule::Threshold { family, d1, k } => match family {
                ThresholdFamily::ToySum => write!(f, "toy-sum:{d1}:{k}"),
                ThresholdFamily::ToyProduct => write!(f, "toy-product:{d1}:{k}"),
                ThresholdFamily::Psi { a, n, s, c8 } => {
                    write!(f, "psi:{a},{n},{s},{}:{d1}:{k}", fmt_q(c8))
                }
            },
        }
    }
}

impl FromStr for DigitSequence {
    type Err = RealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| RealError::InvalidExponent(format!("{m}: `{s}`"));
        let rest = s
            .strip_prefix("digits:")
            .ok_or_else(|| bad("expected digits:<radix>:<rule>"))?;
        let (radix, rule) = rest.split_once(':').ok_or_else(|| bad("missing rule"))?;
        let radix: u32 = radix.parse().map_err(|_| bad("bad radix"))?;
        let parts: Vec<&str> = rule.split(':').collect();
        let num = |i: usize, default: u64| -> Result<u64, RealError> {
            match parts.get(i) {
                Some(p) => p.parse().map_err(|_| bad("bad integer")),
                None => Ok(default),
            }
        };
        let rule = match parts[0] {
            "list" => {
                let v = parts
                    .get(1)
                    .ok_or_else(|| bad("empty list"))?
                    .split(',')
                    .map(|x| x.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad("bad position list"))?;
                DigitRule::Explicit(v)
            }
            "corollary" => DigitRule::Corollary { d1: num(1, 1)? },
            "toy-sum" | "toy-product" => DigitRule::Threshold {
                family: if parts[0] == "toy-sum" {
                    ThresholdFamily::ToySum
                } else {
                    ThresholdFamily::ToyProduct
                },
                d1: num(1, 1)?,
                k: num(2, 1)?,
            },
            "psi" => {
                let p: Vec<&str> = parts
                    .get(1)
                    .ok_or_else(|| bad("psi needs A,N,s,c8"))?
                    .split(',')
                    .collect();
                if p.len() != 4 {
                    return Err(bad("psi needs A,N,s,c8"));
                }
                let a = p[0].parse().map_err(|_| bad("bad A"))?;
                let n = p[1].parse().map_err(|_| bad("bad N"))?;
                let sv = p[2].parse().map_err(|_| bad("bad s"))?;
                let c8 = parse_rational(p[3]).ok_or_else(|| bad("bad c8"))?;
                DigitRule::Threshold {
                    family: ThresholdFamily::Psi { a, n, s: sv, c8 },
                    d1: num(2, 1)?,
                    k: num(3, 1)?,
                }
            }
            _ => return Err(bad("unknown digit rule")),
        };
        DigitSequence::new(radix, rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> DigitSequence {
        s.parse().unwrap()
    }

    #[test]
    fn corollary_positions() {
        let (p, err) = seq("digits:10:corollary:1").take_positions(3);
        assert!(err.is_none());
        assert_eq!(p[0], Position::Exact(Integer::from(1)));
        assert_eq!(p[1], Position::Exact(Integer::from(10000)));
        assert_eq!(p[2].depth(), 2);
        assert!(p[2].as_exact().is_none());
    }

    #[test]
    fn corollary_depth_limit() {
        let (p, err) = seq("digits:10:corollary:1").take_positions(10);
        assert_eq!(p.len(), 5);
        assert!(matches!(err, Some(RealError::DepthExceeded { .. })));
    }

    #[test]
    fn toy_sum_positions() {
        let (p, err) = seq("digits:2:toy-sum:1:1").take_positions(3);
        assert!(err.is_none());
        let exact: Vec<u64> = p.iter().map(|d| d.as_exact().unwrap().to_u64().unwrap()).collect();
        assert_eq!(exact, vec![1, 6, 97]);
    }

    #[test]
    fn digit_queries() {
        let s = seq("digits:10:corollary:1");
        assert_eq!(s.digit(&Integer::from(1)), DigitAnswer::One);
        assert_eq!(s.digit(&Integer::from(10000)), DigitAnswer::One);
        assert_eq!(s.digit(&Integer::from(9999)), DigitAnswer::Zero);
        assert_eq!(s.digit(&Integer::from(1_000_000)), DigitAnswer::Zero);
    }

    #[test]
    fn explicit_list_needs_lookahead() {
        let s = seq("digits:2:list:1,3");
        assert!(matches!(s.enclosure(64), Err(RealError::TailUnbounded { .. })));
        let c = seq("digits:2:list:1,3,200").enclosure(64).unwrap();
        assert!(c.contains_rational(&Rational::from((5, 8))));
    }

    #[test]
    fn corollary_enclosure() {
        let c = seq("digits:10:corollary:1").enclosure(128).unwrap();
        assert!(c.contains_rational(&Rational::from((1, 10))));
        assert!(c.rad().to_f64() < 1e-30);
    }
}
