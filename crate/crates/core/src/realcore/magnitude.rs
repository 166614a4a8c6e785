//! Reals that may be far too large for a plain float, kept as iterated
//! exponentials, and positive magnitudes carried by their logarithm.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use super::ball::{RealBall, RADIUS_PREC};

/// Plain balls hold values of magnitude below `2^PLAIN_LIMIT_BITS`.
pub const PLAIN_LIMIT_BITS: u32 = 4096;

/// Upper bound used for quantities such as `exp(-L)` when `L` is itself a tower.
fn negligible() -> Float {
    Float::with_val(RADIUS_PREC, 1) >> 1_000_000u32
}

fn plain_limit_ln(prec: u32) -> RealBall {
    RealBall::ln2(prec).mul_i64(PLAIN_LIMIT_BITS as i64)
}

/// `log_abs` values above this can be expanded to plain floats without overflow.
const EXPANDABLE_LN: f64 = 16_000_000.0;

/// A real number, possibly astronomically large in absolute value.
///
/// `Tower { negative, log_abs }` stands for `±exp(log_abs)` and is only used
/// once `|value| >= 2^4096`, so nested towers express iterated exponentials.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub enum Scalar {
    Plain(RealBall),
    Tower { negative: bool, log_abs: Box<Scalar> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MagnitudeError {
    #[error("logarithm of a quantity that is not certifiably positive")]
    NotPositive,
    #[error("cancellation between comparable tower values could not be resolved")]
    Cancellation,
}

impl Scalar {
    pub fn from_ball(b: RealBall) -> Scalar {
        Scalar::Plain(b).normalized()
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Scalar {
        Scalar::from_ball(RealBall::from_integer(n, prec))
    }

    pub fn from_i64(n: i64, prec: u32) -> Scalar {
        Scalar::from_ball(RealBall::from_i64(n, prec))
    }

    pub fn precision(&self) -> u32 {
        match self {
            Scalar::Plain(b) => b.precision(),
            Scalar::Tower { log_abs, .. } => log_abs.precision(),
        }
    }

    pub fn as_plain(&self) -> Option<&RealBall> {
        match self {
            Scalar::Plain(b) => Some(b),
            Scalar::Tower { .. } => None,
        }
    }

    pub fn is_tower(&self) -> bool {
        matches!(self, Scalar::Tower { .. })
    }

    /// Number of exponentials stacked on top of the innermost plain ball.
    pub fn depth(&self) -> usize {
        match self {
            Scalar::Plain(_) => 0,
            Scalar::Tower { log_abs, .. } => 1 + log_abs.depth(),
        }
    }

    /// Certified sign; `None` when a plain ball straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Plain(b) => b.sign(),
            Scalar::Tower { negative, .. } => Some(if *negative { Ordering::Less } else { Ordering::Greater }),
        }
    }

    fn normalized(self) -> Scalar {
        match self {
            Scalar::Plain(b) => {
                let limit = Float::with_val(RADIUS_PREC, 1) << PLAIN_LIMIT_BITS;
                if b.mag_lower() >= limit {
                    let negative = b.is_negative();
                    let ln = b.abs().ln().expect("magnitude above limit is positive");
                    Scalar::Tower {
                        negative,
                        log_abs: Box::new(Scalar::Plain(ln)),
                    }
                } else {
                    Scalar::Plain(b)
                }
            }
            Scalar::Tower { negative, log_abs } => {
                let inner = log_abs.normalized();
                if let Scalar::Plain(l) = &inner {
                    let limit = plain_limit_ln(l.precision());
                    if l.upper() < limit.lower() {
                        let v = l.exp();
                        return Scalar::Plain(if negative { v.neg() } else { v });
                    }
                }
                Scalar::Tower {
                    negative,
                    log_abs: Box::new(inner),
                }
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Plain(b) => Scalar::Plain(b.neg()),
            Scalar::Tower { negative, log_abs } => Scalar::Tower {
                negative: !negative,
                log_abs: log_abs.clone(),
            },
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Plain(b) => Scalar::Plain(b.abs()),
            Scalar::Tower { log_abs, .. } => Scalar::Tower {
                negative: false,
                log_abs: log_abs.clone(),
            },
        }
    }

    /// `ln |self|`, requiring a certified nonzero value.
    pub fn ln_abs(&self) -> Result<Scalar, MagnitudeError> {
        match self {
            Scalar::Plain(b) => {
                if b.contains_zero() {
                    return Err(MagnitudeError::NotPositive);
                }
                Ok(Scalar::Plain(b.abs().ln().ok_or(MagnitudeError::NotPositive)?))
            }
            Scalar::Tower { log_abs, .. } => Ok((**log_abs).clone()),
        }
    }

    /// Natural logarithm of a certified positive value.
    pub fn ln(&self) -> Result<Scalar, MagnitudeError> {
        if self.sign() != Some(Ordering::Greater) {
            return Err(MagnitudeError::NotPositive);
        }
        self.ln_abs()
    }

    pub fn exp(&self) -> Scalar {
        match self {
            Scalar::Plain(b) => {
                let limit = plain_limit_ln(b.precision());
                if b.upper() < limit.lower() {
                    Scalar::Plain(b.exp())
                } else {
                    Scalar::Tower {
                        negative: false,
                        log_abs: Box::new(self.clone()),
                    }
                    .normalized()
                }
            }
            Scalar::Tower { negative: false, .. } => Scalar::Tower {
                negative: false,
                log_abs: Box::new(self.clone()),
            },
            Scalar::Tower { negative: true, .. } => {
                // exp of a hugely negative number: a positive value below any float
                let prec = self.precision();
                Scalar::Plain(RealBall::with_radius(Float::new(prec), &negligible()))
            }
        }
    }

    /// Product. Fails only if a plain factor straddles zero against a tower.
    pub fn mul(&self, other: &Scalar) -> Result<Scalar, MagnitudeError> {
        match (self, other) {
            (Scalar::Plain(a), Scalar::Plain(b)) => Ok(Scalar::from_ball(a.mul(b))),
            _ => {
                for s in [self, other] {
                    if let Scalar::Plain(b) = s {
                        if b.is_exact() && b.mid().is_zero() {
                            return Ok(Scalar::Plain(RealBall::zero(b.precision())));
                        }
                    }
                }
                let neg = (self.sign() == Some(Ordering::Less)) != (other.sign() == Some(Ordering::Less));
                let la = self.ln_abs()?;
                let lb = other.ln_abs()?;
                let log_abs = la.add(&lb)?;
                Ok(Scalar::Tower {
                    negative: neg,
                    log_abs: Box::new(log_abs),
                }
                .normalized())
            }
        }
    }

    pub fn mul_ball(&self, b: &RealBall) -> Result<Scalar, MagnitudeError> {
        self.mul(&Scalar::Plain(b.clone()))
    }

    /// Quotient by a certified nonzero scalar.
    pub fn div(&self, other: &Scalar) -> Result<Scalar, MagnitudeError> {
        match (self, other) {
            (Scalar::Plain(a), Scalar::Plain(b)) => a.div(b).map(Scalar::from_ball).ok_or(MagnitudeError::NotPositive),
            _ => {
                let inv = match other {
                    Scalar::Plain(b) => {
                        let one = RealBall::one(b.precision());
                        Scalar::from_ball(one.div(b).ok_or(MagnitudeError::NotPositive)?)
                    }
                    Scalar::Tower { negative, log_abs } => Scalar::Tower {
                        negative: *negative,
                        log_abs: Box::new(log_abs.neg()),
                    }
                    .normalized(),
                };
                self.mul(&inv)
            }
        }
    }

    /// `self^y` for a certified positive base.
    pub fn pow(&self, y: &Scalar) -> Result<Scalar, MagnitudeError> {
        Ok(self.ln()?.mul(y)?.exp())
    }

    pub fn pow_u64(&self, k: u64) -> Result<Scalar, MagnitudeError> {
        match self {
            Scalar::Plain(b) if k <= u32::MAX as u64 => {
                let limit_bits = PLAIN_LIMIT_BITS as f64;
                let est = b.mag_upper().to_f64().max(1.0).log2() * k as f64;
                if est < 4.0 * limit_bits {
                    return Ok(Scalar::from_ball(b.pow_u32(k as u32)));
                }
                let sign_neg = b.is_negative() && k % 2 == 1;
                let l = self
                    .ln_abs()?
                    .mul(&Scalar::from_integer(&Integer::from(k), b.precision()))?;
                let mag = l.exp();
                Ok(if sign_neg { mag.neg() } else { mag })
            }
            _ => {
                let l = self
                    .ln_abs()?
                    .mul(&Scalar::from_integer(&Integer::from(k), self.precision()))?;
                let neg = self.sign() == Some(Ordering::Less) && k % 2 == 1;
                let mag = l.exp();
                Ok(if neg { mag.neg() } else { mag })
            }
        }
    }

    /// Sum. Towers absorb much smaller summands as a radius widening.
    pub fn add(&self, other: &Scalar) -> Result<Scalar, MagnitudeError> {
        match (self, other) {
            (Scalar::Plain(a), Scalar::Plain(b)) => Ok(Scalar::from_ball(a.add(b))),
            _ => {
                // order by magnitude: big first
                let (big, small) = match cmp_abs(self, other) {
                    Some(Ordering::Less) => (other, self),
                    Some(_) => (self, other),
                    None => return self.add_same_sign(other).map_or_else(|| self.add_comparable(other), Ok),
                };
                let (neg_big, l_big) = match big {
                    Scalar::Tower { negative, log_abs } => (*negative, (**log_abs).clone()),
                    Scalar::Plain(_) => return self.add_comparable(other),
                };
                if let Scalar::Plain(b) = small {
                    if b.is_exact() && b.mid().is_zero() {
                        return Ok(big.clone());
                    }
                }
                let l_small = match small.ln_abs() {
                    Ok(l) => l,
                    // a plain summand straddling zero is bounded by its magnitude
                    Err(_) => match small {
                        Scalar::Plain(b) => {
                            let m = b.mag_upper();
                            let m = if m.is_zero() { negligible() } else { m };
                            Scalar::Plain(RealBall::with_radius(m, &Float::new(RADIUS_PREC)).ln().unwrap())
                        }
                        Scalar::Tower { .. } => unreachable!(),
                    },
                };
                // |ln(1 + t)| <= 2|t| for |t| <= 1/2, t = small / big
                let d = l_small.sub(&l_big)?;
                let widening = match &d {
                    Scalar::Plain(db) => {
                        if db.upper() >= -1 {
                            return self.add_comparable(other);
                        }
                        let t = Float::with_val_round(RADIUS_PREC, db.upper(), Round::Up).0;
                        let mut e = t;
                        e.exp_round(Round::Up);
                        Float::with_val_round(RADIUS_PREC, &e * 2u32, Round::Up).0
                    }
                    Scalar::Tower { negative: true, .. } => negligible(),
                    Scalar::Tower { negative: false, .. } => return Err(MagnitudeError::Cancellation),
                };
                let widened = widen_scalar(&l_big, &widening);
                Ok(Scalar::Tower {
                    negative: neg_big,
                    log_abs: Box::new(widened),
                }
                .normalized())
            }
        }
    }

    /// Two towers of one sign with overlapping sizes: `log|x + y|` lies in
    /// `ln 2` plus the hull of the two logarithms.
    fn add_same_sign(&self, other: &Scalar) -> Option<Scalar> {
        match (self, other) {
            (
                Scalar::Tower {
                    negative: na,
                    log_abs: la,
                },
                Scalar::Tower {
                    negative: nb,
                    log_abs: lb,
                },
            ) if na == nb => {
                let h = hull_scalar(la, lb)?;
                let ln2 = Scalar::Plain(RealBall::ln2(h.precision()));
                Some(
                    Scalar::Tower {
                        negative: *na,
                        log_abs: Box::new(h.add(&ln2).ok()?),
                    }
                    .normalized(),
                )
            }
            _ => None,
        }
    }

    /// Addition of values close enough in size to be expanded into plain floats.
    fn add_comparable(&self, other: &Scalar) -> Result<Scalar, MagnitudeError> {
        let expand = |s: &Scalar| -> Result<RealBall, MagnitudeError> {
            match s {
                Scalar::Plain(b) => Ok(b.clone()),
                Scalar::Tower { negative, log_abs } => match &**log_abs {
                    Scalar::Plain(l) if l.upper() < EXPANDABLE_LN => {
                        let v = l.exp();
                        Ok(if *negative { v.neg() } else { v })
                    }
                    _ => Err(MagnitudeError::Cancellation),
                },
            }
        };
        Ok(Scalar::from_ball(expand(self)?.add(&expand(other)?)))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, MagnitudeError> {
        self.add(&other.neg())
    }

    /// Certified comparison; `None` when enclosures overlap.
    pub fn cmp_certified(&self, other: &Scalar) -> Option<Ordering> {
        let sa = self.sign();
        let sb = other.sign();
        if let (Scalar::Plain(a), Scalar::Plain(b)) = (self, other) {
            if a.is_exact() && b.is_exact() && a.mid() == b.mid() {
                return Some(Ordering::Equal);
            }
            return a.cmp_certified(b);
        }
        match (sa, sb) {
            (Some(x), Some(y)) if x != y => Some(x.cmp(&y)),
            (Some(Ordering::Greater), Some(Ordering::Greater)) => cmp_abs(self, other),
            (Some(Ordering::Less), Some(Ordering::Less)) => cmp_abs(self, other).map(Ordering::reverse),
            _ => None,
        }
    }

    /// `max` of two scalars; `None` when they cannot be ordered.
    pub fn max(&self, other: &Scalar) -> Option<Scalar> {
        match self.cmp_certified(other)? {
            Ordering::Less => Some(other.clone()),
            _ => Some(self.clone()),
        }
    }

    /// Enclosure of `max(self, other)`, also when the two overlap.
    pub fn max_enclosure(&self, other: &Scalar) -> Scalar {
        if let Some(m) = self.max(other) {
            return m;
        }
        match (self, other) {
            (Scalar::Plain(a), Scalar::Plain(b)) => Scalar::Plain(a.max(b)),
            (
                Scalar::Tower {
                    negative: false,
                    log_abs: a,
                },
                Scalar::Tower {
                    negative: false,
                    log_abs: b,
                },
            ) => Scalar::Tower {
                negative: false,
                log_abs: Box::new(a.max_enclosure(b)),
            },
            (
                Scalar::Tower {
                    negative: true,
                    log_abs: a,
                },
                Scalar::Tower {
                    negative: true,
                    log_abs: b,
                },
            ) => Scalar::Tower {
                negative: true,
                log_abs: Box::new(a.min_enclosure(b)),
            },
            _ => match (expand(self), expand(other)) {
                (Some(a), Some(b)) => Scalar::from_ball(a.max(&b)),
                _ => unreachable!("towers of opposite sign are always ordered"),
            },
        }
    }

    /// Enclosure of `min(self, other)`.
    pub fn min_enclosure(&self, other: &Scalar) -> Scalar {
        self.neg().max_enclosure(&other.neg()).neg()
    }

    /// Exact integer value of a plain point ball.
    pub fn to_exact_integer(&self) -> Option<Integer> {
        self.as_plain()?.to_exact_integer()
    }

    /// Approximate `log10 |value|` for reporting; infinite for towers beyond f64.
    pub fn approx_log10_abs(&self) -> f64 {
        match self {
            Scalar::Plain(b) => b.mid().to_f64().abs().log10(),
            Scalar::Tower { log_abs, .. } => match &**log_abs {
                Scalar::Plain(l) => l.mid().to_f64() / std::f64::consts::LN_10,
                Scalar::Tower { .. } => f64::INFINITY,
            },
        }
    }

    /// Human-readable rendering such as `-exp(exp(6654.2...))`.
    pub fn describe(&self, digits: usize) -> String {
        match self {
            Scalar::Plain(b) => b.to_decimal(digits),
            Scalar::Tower { negative, log_abs } => {
                format!("{}exp({})", if *negative { "-" } else { "" }, log_abs.describe(digits))
            }
        }
    }
}

fn expand(s: &Scalar) -> Option<RealBall> {
    match s {
        Scalar::Plain(b) => Some(b.clone()),
        Scalar::Tower { negative, log_abs } => match &**log_abs {
            Scalar::Plain(l) if l.upper() < EXPANDABLE_LN => {
                let v = l.exp();
                Some(if *negative { v.neg() } else { v })
            }
            _ => None,
        },
    }
}

fn widen_scalar(s: &Scalar, extra: &Float) -> Scalar {
    match s {
        Scalar::Plain(b) => Scalar::Plain(b.widen(extra)),
        Scalar::Tower { negative, log_abs } => {
            // widening a tower by a tiny absolute amount only touches its
            // innermost ball by an even tinier relative amount
            Scalar::Tower {
                negative: *negative,
                log_abs: Box::new(widen_scalar(log_abs, &negligible())),
            }
        }
    }
}

/// A scalar enclosing both `a` and `b`, when they share a form.
fn hull_scalar(a: &Scalar, b: &Scalar) -> Option<Scalar> {
    match (a, b) {
        (Scalar::Plain(x), Scalar::Plain(y)) => Some(Scalar::Plain(x.hull(y))),
        (
            Scalar::Tower {
                negative: na,
                log_abs: la,
            },
            Scalar::Tower {
                negative: nb,
                log_abs: lb,
            },
        ) if na == nb => Some(Scalar::Tower {
            negative: *na,
            log_abs: Box::new(hull_scalar(la, lb)?),
        }),
        _ => None,
    }
}

/// Compares `|a|` and `|b|`.
fn cmp_abs(a: &Scalar, b: &Scalar) -> Option<Ordering> {
    match (a, b) {
        (Scalar::Plain(x), Scalar::Plain(y)) => {
            let (xa, ya) = (x.abs(), y.abs());
            if xa.is_exact() && ya.is_exact() && xa.mid() == ya.mid() {
                return Some(Ordering::Equal);
            }
            if x.contains_zero() && y.contains_zero() {
                return None;
            }
            let (xl, xu) = (x.mag_lower(), x.mag_upper());
            let (yl, yu) = (y.mag_lower(), y.mag_upper());
            if xu < yl {
                Some(Ordering::Less)
            } else if yu < xl {
                Some(Ordering::Greater)
            } else {
                None
            }
        }
        _ => {
            let la = a.ln_abs().ok();
            let lb = b.ln_abs().ok();
            match (la, lb) {
                (Some(la), Some(lb)) => la.cmp_certified(&lb),
                // a zero-straddling plain value is smaller than any tower
                (None, Some(_)) if b.is_tower() => Some(Ordering::Less),
                (Some(_), None) if a.is_tower() => Some(Ordering::Greater),
                _ => None,
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.describe(20))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe(20))
    }
}

/// Sign of a [`LogMagnitude`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A real number stored as `sign * exp(log_value)`.
///
/// The bound functions of the dissociation module return their values in
/// this form: the quantities involved (`exp(-2^600)`, ...) underflow every
/// float format, while their logarithms are ordinary or tower scalars.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct LogMagnitude {
    pub sign: Sign,
    /// Natural log of the absolute value; meaningless when `sign` is zero.
    pub log_value: Scalar,
}

impl LogMagnitude {
    pub fn positive(log_value: Scalar) -> Self {
        LogMagnitude {
            sign: Sign::Positive,
            log_value,
        }
    }

    pub fn zero(prec: u32) -> Self {
        LogMagnitude {
            sign: Sign::Zero,
            log_value: Scalar::Plain(RealBall::zero(prec)),
        }
    }

    /// From a plain value; fails when the ball straddles zero.
    pub fn from_scalar(v: &Scalar) -> Result<Self, MagnitudeError> {
        match v.sign() {
            Some(Ordering::Equal) => Ok(Self::zero(v.precision())),
            Some(Ordering::Greater) => Ok(Self::positive(v.ln_abs()?)),
            Some(Ordering::Less) => Ok(LogMagnitude {
                sign: Sign::Negative,
                log_value: v.ln_abs()?,
            }),
            None => Err(MagnitudeError::NotPositive),
        }
    }

    pub fn log_value(&self) -> &Scalar {
        &self.log_value
    }

    pub fn is_tower(&self) -> bool {
        self.log_value.is_tower()
    }

    pub fn mul(&self, other: &LogMagnitude) -> Result<LogMagnitude, MagnitudeError> {
        let sign = match (self.sign, other.sign) {
            (Sign::Zero, _) | (_, Sign::Zero) => return Ok(Self::zero(self.log_value.precision())),
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        };
        Ok(LogMagnitude {
            sign,
            log_value: self.log_value.add(&other.log_value)?,
        })
    }

    pub fn div(&self, other: &LogMagnitude) -> Result<LogMagnitude, MagnitudeError> {
        if other.sign == Sign::Zero {
            return Err(MagnitudeError::NotPositive);
        }
        let inv = LogMagnitude {
            sign: other.sign,
            log_value: other.log_value.neg(),
        };
        self.mul(&inv)
    }

    /// `self^y` for positive `self`.
    pub fn pow(&self, y: &Scalar) -> Result<LogMagnitude, MagnitudeError> {
        if self.sign != Sign::Positive {
            return Err(MagnitudeError::NotPositive);
        }
        Ok(LogMagnitude::positive(self.log_value.mul(y)?))
    }

    pub fn cmp_certified(&self, other: &LogMagnitude) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Some(Ordering::Equal),
                Sign::Positive => self.log_value.cmp_certified(&other.log_value),
                Sign::Negative => other.log_value.cmp_certified(&self.log_value),
            },
            o => Some(o),
        }
    }

    pub fn max(&self, other: &LogMagnitude) -> Option<LogMagnitude> {
        match self.cmp_certified(other)? {
            Ordering::Less => Some(other.clone()),
            _ => Some(self.clone()),
        }
    }

    pub fn describe(&self) -> String {
        let s = match self.sign {
            Sign::Zero => return "0".into(),
            Sign::Positive => "",
            Sign::Negative => "-",
        };
        format!("{s}exp({})", self.log_value.describe(20))
    }
}

impl fmt::Debug for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogMagnitude({})", self.describe())
    }
}
