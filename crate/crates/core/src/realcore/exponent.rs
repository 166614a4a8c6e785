//! The exponent `c` in its four representations, and certified `x^c`.

use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::{Pow, PowAssignRound};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ball::{RealBall, GUARD_BITS};
use super::digits::DigitSequence;
use super::error::RealError;
use super::poly::Poly;

/// `a/q` in lowest terms with `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    a: i64,
    q: u64,
}

impl RationalExponent {
    pub fn new(a: i64, q: u64) -> Result<Self, RealError> {
        if q == 0 {
            return Err(RealError::InvalidExponent("denominator must be positive".into()));
        }
        let g = gcd(a.unsigned_abs(), q);
        let g = if g == 0 { 1 } else { g };
        let q = q / g;
        let a = a / g as i64;
        Ok(RationalExponent {
            a,
            q: if a == 0 { 1 } else { q },
        })
    }

    pub fn numer(&self) -> i64 {
        self.a
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from((self.a, self.q))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Source of a numerically specified exponent. Named constants can be
/// re-evaluated at any precision; decimal balls carry a fixed radius.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericSource {
    Sqrt(u64),
    PiOver(u64),
    Decimal { value: Rational, radius: Rational },
    Fixed(RealBall),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericExponent {
    source: NumericSource,
}

impl NumericExponent {
    pub fn sqrt(k: u64) -> Self {
        NumericExponent {
            source: NumericSource::Sqrt(k),
        }
    }

    pub fn pi_over(k: u64) -> Self {
        NumericExponent {
            source: NumericSource::PiOver(k),
        }
    }

    pub fn decimal(value: Rational, radius: Rational) -> Self {
        NumericExponent {
            source: NumericSource::Decimal {
                value,
                radius: radius.abs(),
            },
        }
    }

    pub fn fixed(ball: RealBall) -> Self {
        NumericExponent {
            source: NumericSource::Fixed(ball),
        }
    }

    pub fn source(&self) -> &NumericSource {
        &self.source
    }

    pub fn enclosure(&self, prec: u32) -> RealBall {
        match &self.source {
            NumericSource::Sqrt(k) => {
                let x = Float::with_val(64, *k);
                let lo = Float::with_val_round(prec, x.sqrt_ref(), Round::Down).0;
                let hi = Float::with_val_round(prec, x.sqrt_ref(), Round::Up).0;
                RealBall::from_interval(&lo, &hi, prec)
            }
            NumericSource::PiOver(k) => RealBall::pi(prec)
                .div(&RealBall::from_u64(*k, prec))
                .expect("k is positive"),
            NumericSource::Decimal { value, radius } => {
                let r = RealBall::from_rational(radius, 64).upper();
                RealBall::from_rational(value, prec).widen(&r)
            }
            NumericSource::Fixed(b) => b.clone(),
        }
    }
}

/// `c = log_base(phi)` for the unique root `phi` of `poly` in `(lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicLog {
    base: u64,
    poly: Poly,
    squarefree: Poly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicLog {
    pub fn new(base: u64, poly: Poly, lo: Rational, hi: Rational) -> Result<Self, RealError> {
        if base < 2 {
            return Err(RealError::InvalidExponent("logarithm base must be at least 2".into()));
        }
        if poly.integer_coeffs().is_none() || poly.degree().unwrap_or(0) == 0 {
            return Err(RealError::InvalidExponent(
                "polynomial must be nonconstant with integer coefficients".into(),
            ));
        }
        if lo < 0 || lo >= hi {
            return Err(RealError::InvalidExponent(
                "isolation interval must satisfy 0 <= lo < hi".into(),
            ));
        }
        let squarefree = poly.squarefree();
        let roots = squarefree.count_roots(&lo, &hi);
        if roots != 1 {
            return Err(RealError::InvalidExponent(format!(
                "isolation interval holds {roots} roots, expected exactly one"
            )));
        }
        Ok(AlgebraicLog {
            base,
            poly,
            squarefree,
            lo,
            hi,
        })
    }

    /// Convenience constructor from integer coefficients, highest degree first.
    pub fn from_coeffs(
        base: u64,
        coeffs_high_first: &[i64],
        lo: (i64, u64),
        hi: (i64, u64),
    ) -> Result<Self, RealError> {
        Self::new(
            base,
            Poly::from_ints_high_first(coeffs_high_first),
            Rational::from(lo),
            Rational::from(hi),
        )
    }

    /// `log_2` of the plastic number, the real root of `x^3 - x - 1`.
    pub fn plastic() -> Self {
        Self::from_coeffs(2, &[1, 0, -1, -1], (132, 100), (133, 100)).expect("valid isolation")
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    /// Enclosure of the root itself.
    pub fn root_enclosure(&self, prec: u32) -> RealBall {
        let (a, b) = self.squarefree.refine_root(&self.lo, &self.hi, prec + GUARD_BITS);
        let lo = RealBall::from_rational(&a, prec + GUARD_BITS).lower();
        let hi = RealBall::from_rational(&b, prec + GUARD_BITS).upper();
        RealBall::from_interval(&lo, &hi, prec + GUARD_BITS)
    }

    /// Whether the root is a zero of `p`, decided exactly.
    pub fn is_root_of(&self, p: &Poly) -> bool {
        if p.is_zero() {
            return true;
        }
        if p.rem(&self.poly).is_zero() {
            return true;
        }
        let g = p.gcd(&self.squarefree);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        g.squarefree().count_roots(&self.lo, &self.hi) == 1
    }

    pub fn enclosure(&self, prec: u32) -> Result<RealBall, RealError> {
        let mut bits = prec + 8;
        loop {
            let phi = self.root_enclosure(bits);
            if let Some(l) = phi.ln() {
                let lb = RealBall::from_u64(self.base, bits + GUARD_BITS)
                    .ln()
                    .expect("base >= 2");
                return Ok(l.div(&lb).expect("ln base > 0").with_precision(prec + GUARD_BITS));
            }
            if bits > 1 << 16 {
                return Err(RealError::InvalidExponent("root is not certifiably positive".into()));
            }
            bits *= 2;
        }
    }
}

/// The exponent `c`; the variant decides which exact certification applies.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponent {
    Rational(RationalExponent),
    NumericBall(NumericExponent),
    AlgebraicLog(AlgebraicLog),
    DigitSequence(DigitSequence),
}

/// An exponent prepared for repeated power evaluation at a fixed precision.
#[derive(Debug, Clone)]
pub enum ExponentEval {
    Rational { a: i64, q: u64 },
    Ball(RealBall),
}

impl Exponent {
    pub fn rational(a: i64, q: u64) -> Result<Self, RealError> {
        Ok(Exponent::Rational(RationalExponent::new(a, q)?))
    }

    pub fn sqrt2() -> Self {
        Exponent::NumericBall(NumericExponent::sqrt(2))
    }

    pub fn plastic() -> Self {
        Exponent::AlgebraicLog(AlgebraicLog::plastic())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Rational(r) if r.a == 0)
    }

    /// Enclosure of `c` itself at `prec` bits (plus guard bits).
    pub fn enclosure(&self, prec: u32) -> Result<RealBall, RealError> {
        match self {
            Exponent::Rational(r) => Ok(RealBall::from_rational(&r.to_rational(), prec + GUARD_BITS)),
            Exponent::NumericBall(n) => Ok(n.enclosure(prec + GUARD_BITS)),
            Exponent::AlgebraicLog(l) => l.enclosure(prec),
            Exponent::DigitSequence(d) => d.enclosure(prec + GUARD_BITS),
        }
    }

    pub fn evaluator(&self, prec: u32) -> Result<ExponentEval, RealError> {
        match self {
            Exponent::Rational(r) => Ok(ExponentEval::Rational { a: r.a, q: r.q }),
            // 72 extra bits cover ln x for every x < 2^64
            _ => Ok(ExponentEval::Ball(self.enclosure(prec + 72)?)),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        self.enclosure(64).map(|b| b.mid_f64()).unwrap_or(f64::NAN)
    }
}

/// Certified enclosure of `x^c` for `x >= 1`.
pub fn pow(x: u64, c: &Exponent, prec: u32) -> Result<RealBall, RealError> {
    if x == 0 {
        return Err(RealError::OutOfRange("base must be at least 1".into()));
    }
    if x == 1 {
        return Ok(RealBall::one(prec));
    }
    Ok(pow_eval(x, &c.evaluator(prec)?, prec))
}

/// `x^c` for a prepared exponent. Endpoints use directed rounding, so the
/// result is sound for every `c` in the exponent ball.
pub fn pow_eval(x: u64, c: &ExponentEval, prec: u32) -> RealBall {
    if x == 1 {
        return RealBall::one(prec);
    }
    let p = prec + GUARD_BITS;
    match c {
        ExponentEval::Rational { a: 0, .. } => RealBall::one(prec),
        ExponentEval::Rational { a, q } => {
            let base = Float::with_val(p.max(64), x);
            let mut lo = base.clone();
            let mut hi = base;
            if *q > 1 {
                let k = u32::try_from(*q).expect("denominator fits in u32");
                lo.root_round(k, Round::Down);
                hi.root_round(k, Round::Up);
            }
            let e = u32::try_from(a.unsigned_abs()).expect("numerator fits in u32");
            lo.pow_assign_round(e, Round::Down);
            hi.pow_assign_round(e, Round::Up);
            if *a < 0 {
                let one = Float::with_val(p, 1);
                let new_lo = Float::with_val_round(p, &one / &hi, Round::Down).0;
                let new_hi = Float::with_val_round(p, &one / &lo, Round::Up).0;
                lo = new_lo;
                hi = new_hi;
            }
            RealBall::from_interval(&lo, &hi, p)
        }
        ExponentEval::Ball(cb) => {
            let base = Float::with_val(p.max(64), x);
            let mut lo = base.clone();
            let mut hi = base;
            lo.pow_assign_round(&cb.lower(), Round::Down);
            hi.pow_assign_round(&cb.upper(), Round::Up);
            RealBall::from_interval(&lo, &hi, p)
        }
    }
}

/// Parses decimals (`-1.25e-3`), fractions (`7/3`) and integers exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: Integer = n.trim().parse().ok()?;
        let d: Integer = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::from((n, d)));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|ch| ch.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let mut num: Integer = if all.is_empty() {
        Integer::new()
    } else {
        all.parse().ok()?
    };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    Some(if scale >= 0 {
        Rational::from(num * ten.pow(scale as u32))
    } else {
        Rational::from((num, ten.pow((-scale) as u32)))
    })
}

fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => {
                if r.q == 1 {
                    write!(f, "{}", r.a)
                } else {
                    write!(f, "{}/{}", r.a, r.q)
                }
            }
            Exponent::NumericBall(n) => match &n.source {
                NumericSource::Sqrt(k) => write!(f, "sqrt:{k}"),
                NumericSource::PiOver(k) => write!(f, "pi/{k}"),
                NumericSource::Decimal { value, radius } => {
                    write!(f, "ball:{}+-{}", fmt_rational(value), fmt_rational(radius))
                }
                NumericSource::Fixed(b) => write!(f, "ballhex:{}", b.to_hex_string()),
            },
            Exponent::AlgebraicLog(l) => {
                let coeffs: Vec<String> = l.poly.coeffs().iter().rev().map(fmt_rational).collect();
                write!(
                    f,
                    "alglog:{}:{}:{},{}",
                    l.base,
                    coeffs.join(","),
                    fmt_rational(&l.lo),
                    fmt_rational(&l.hi)
                )
            }
            Exponent::DigitSequence(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = RealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |msg: &str| RealError::InvalidExponent(format!("{msg}: `{s}`"));
        if s == "sqrt2" {
            return Ok(Exponent::sqrt2());
        }
        if s == "plastic" {
            return Ok(Exponent::plastic());
        }
        if let Some(k) = s.strip_prefix("sqrt:") {
            let k: u64 = k.parse().map_err(|_| bad("bad radicand"))?;
            return Ok(Exponent::NumericBall(NumericExponent::sqrt(k)));
        }
        if let Some(k) = s.strip_prefix("pi/") {
            let k: u64 = k.parse().map_err(|_| bad("bad divisor"))?;
            if k == 0 {
                return Err(bad("division by zero"));
            }
            return Ok(Exponent::NumericBall(NumericExponent::pi_over(k)));
        }
        if let Some(rest) = s.strip_prefix("ball:") {
            let (v, r) = match rest.split_once("+-").or_else(|| rest.split_once('±')) {
                Some((v, r)) => (v, r),
                None => (rest, "0"),
            };
            let value = parse_rational(v).ok_or_else(|| bad("bad ball midpoint"))?;
            let radius = parse_rational(r).ok_or_else(|| bad("bad ball radius"))?;
            return Ok(Exponent::NumericBall(NumericExponent::decimal(value, radius)));
        }
        if let Some(rest) = s.strip_prefix("ballhex:") {
            let b = RealBall::from_hex_string(rest).ok_or_else(|| bad("bad hex ball"))?;
            return Ok(Exponent::NumericBall(NumericExponent::fixed(b)));
        }
        if let Some(rest) = s.strip_prefix("alglog:") {
            let parts: Vec<&str> = rest.splitn(3, ':').collect();
            if parts.len() != 3 {
                return Err(bad("expected alglog:<base>:<coeffs>:<lo>,<hi>"));
            }
            let base: u64 = parts[0].parse().map_err(|_| bad("bad base"))?;
            let coeffs = parts[1]
                .split(',')
                .map(|c| c.trim().parse::<Integer>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("bad coefficient list"))?;
            let (lo, hi) = parts[2].split_once(',').ok_or_else(|| bad("bad isolation interval"))?;
            let lo = parse_rational(lo).ok_or_else(|| bad("bad lower endpoint"))?;
            let hi = parse_rational(hi).ok_or_else(|| bad("bad upper endpoint"))?;
            let low_first: Vec<Integer> = coeffs.into_iter().rev().collect();
            let poly = Poly::from_integers_low_first(&low_first);
            return Ok(Exponent::AlgebraicLog(AlgebraicLog::new(base, poly, lo, hi)?));
        }
        if s.starts_with("digits:") {
            return Ok(Exponent::DigitSequence(s.parse()?));
        }
        let (a, q) = match s.split_once('/') {
            Some((a, q)) => (
                a.trim().parse::<i64>().map_err(|_| bad("bad numerator"))?,
                q.trim().parse::<u64>().map_err(|_| bad("bad denominator"))?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad("unrecognised exponent"))?, 1),
        };
        if a.unsigned_abs() > u32::MAX as u64 || q > u32::MAX as u64 {
            return Err(bad("rational exponent too large"));
        }
        Exponent::rational(a, q)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_exponents_are_normalised() {
        let c: Exponent = "2/4".parse().unwrap();
        assert_eq!(c.to_string(), "1/2");
        let c: Exponent = "-3/6".parse().unwrap();
        assert_eq!(c.to_string(), "-1/2");
        assert!("0/5".parse::<Exponent>().unwrap().is_zero());
    }

    #[test]
    fn square_root_of_four_is_exactly_two() {
        let c = Exponent::rational(1, 2).unwrap();
        let b = pow(4, &c, 64).unwrap();
        assert_eq!(b.to_exact_integer(), Some(Integer::from(2)));
    }

    #[test]
    fn one_to_any_power_is_one() {
        for c in [
            Exponent::sqrt2(),
            Exponent::plastic(),
            Exponent::rational(-7, 3).unwrap(),
        ] {
            assert_eq!(pow(1, &c, 64).unwrap().to_exact_integer(), Some(Integer::from(1)));
        }
    }

    #[test]
    fn sixteen_to_log2_plastic_is_plastic_fourth_power() {
        let c = Exponent::plastic();
        let got = pow(16, &c, 128).unwrap();
        let phi = AlgebraicLog::plastic().root_enclosure(200);
        let want = phi.pow_u32(4);
        assert!(got.overlaps(&want));
        assert!(got.rad().to_f64() < 1e-30);
        assert!((got.mid_f64() - 3.079595623).abs() < 1e-8);
    }

    #[test]
    fn negative_rational_power() {
        let c = Exponent::rational(-1, 2).unwrap();
        let b = pow(9, &c, 64).unwrap();
        assert!(b.contains_rational(&Rational::from((1, 3))));
    }

    #[test]
    fn descriptors_round_trip() {
        for s in [
            "1/2",
            "-3",
            "sqrt:2",
            "pi/4",
            "ball:500000001/1000000000+-0",
            "alglog:2:1,0,-1,-1:33/25,133/100",
            "digits:10:corollary:1",
            "digits:2:toy-sum:1:1",
            "digits:2:list:1,3,7",
        ] {
            let c: Exponent = s.parse().unwrap();
            let again: Exponent = c.to_string().parse().unwrap();
            assert_eq!(c, again, "{s}");
        }
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(
            parse_rational("0.500000001"),
            Some(Rational::from((500000001, 1000000000)))
        );
        assert_eq!(parse_rational("-1.5e2"), Some(Rational::from(-150)));
        assert_eq!(parse_rational("1e-3"), Some(Rational::from((1, 1000))));
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn bad_isolation_is_rejected() {
        assert!(AlgebraicLog::from_coeffs(2, &[1, 0, -1, -1], (0, 1), (1, 1)).is_err());
        assert!(AlgebraicLog::from_coeffs(1, &[1, 0, -1, -1], (1, 1), (2, 1)).is_err());
    }
}
