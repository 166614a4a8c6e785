//! Midpoint-radius real balls over MPFR floats with outward rounding.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, CompleteRound};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

/// Precision used for radii. Radii are always rounded up.
pub const RADIUS_PREC: u32 = 64;

/// Extra bits carried by transcendental evaluations.
pub const GUARD_BITS: u32 = 16;

/// A certified enclosure `[mid - rad, mid + rad]` of a real number.
///
/// Every operation returns a ball that contains the exact result of the
/// operation applied to any members of the input balls.
#[derive(Clone, PartialEq)]
pub struct RealBall {
    mid: Float,
    rad: Float,
    prec: u32,
}

fn zero_rad() -> Float {
    Float::new(RADIUS_PREC)
}

/// Upper bound on the rounding error of a value that was rounded to nearest.
fn rounding_error(value: &Float, ternary: Ordering) -> Float {
    if ternary == Ordering::Equal {
        return zero_rad();
    }
    match value.get_exp() {
        Some(exp) => {
            let mut ulp = Float::with_val(RADIUS_PREC, 1);
            ulp <<= exp - value.prec() as i32;
            ulp
        }
        None => zero_rad(),
    }
}

fn add_up(a: &Float, b: &Float) -> Float {
    (a + b).complete_round(RADIUS_PREC, Round::Up).0
}

fn mul_up(a: &Float, b: &Float) -> Float {
    (a * b).complete_round(RADIUS_PREC, Round::Up).0
}

fn abs_up(a: &Float) -> Float {
    Float::with_val_round(RADIUS_PREC, &*a.as_abs(), Round::Up).0
}

impl RealBall {
    /// Exact ball around an integer. The precision grows to hold the integer exactly.
    pub fn from_integer(value: &Integer, prec: u32) -> Self {
        let bits = value.significant_bits().max(1);
        let p = prec.max(bits);
        RealBall {
            mid: Float::with_val(p, value),
            rad: zero_rad(),
            prec: p,
        }
    }

    pub fn from_i64(value: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(value), prec)
    }

    pub fn from_u64(value: u64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(value), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_u64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_u64(1, prec)
    }

    /// Enclosure of a rational number, exact when the rational is dyadic and fits.
    pub fn from_rational(value: &Rational, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, value, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        RealBall { mid, rad, prec }
    }

    /// Exact ball around a finite `f64`.
    pub fn from_f64(value: f64, prec: u32) -> Self {
        assert!(value.is_finite(), "non-finite f64 cannot seed a ball");
        RealBall {
            mid: Float::with_val(prec.max(53), value),
            rad: zero_rad(),
            prec: prec.max(53),
        }
    }

    /// Builds a ball from a midpoint and a radius. The radius is rounded up.
    pub fn with_radius(mid: Float, rad: &Float) -> Self {
        assert!(!rad.is_sign_negative() || rad.is_zero(), "negative radius");
        let prec = mid.prec();
        RealBall {
            mid,
            rad: Float::with_val_round(RADIUS_PREC, rad, Round::Up).0,
            prec,
        }
    }

    /// Smallest ball at `prec` containing the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Float, hi: &Float, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        let (mut mid, _) = Float::with_val_round(prec, lo + hi, Round::Nearest);
        mid /= 2u32;
        let left = Float::with_val_round(RADIUS_PREC, &mid - lo, Round::Up).0;
        let right = Float::with_val_round(RADIUS_PREC, hi - &mid, Round::Up).0;
        let rad = if left > right { left } else { right };
        RealBall { mid, rad, prec }
    }

    /// Ball around pi.
    pub fn pi(prec: u32) -> Self {
        let lo = Float::with_val_round(prec + GUARD_BITS, Constant::Pi, Round::Down).0;
        let hi = Float::with_val_round(prec + GUARD_BITS, Constant::Pi, Round::Up).0;
        Self::from_interval(&lo, &hi, prec)
    }

    /// Ball around ln 2.
    pub fn ln2(prec: u32) -> Self {
        let lo = Float::with_val_round(prec + GUARD_BITS, Constant::Log2, Round::Down).0;
        let hi = Float::with_val_round(prec + GUARD_BITS, Constant::Log2, Round::Up).0;
        Self::from_interval(&lo, &hi, prec)
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec + 2, &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec + 2, &self.mid + &self.rad, Round::Up).0
    }

    /// Outward-rounded `f64` enclosure.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = self.lower().to_f64_round(Round::Down);
        let hi = self.upper().to_f64_round(Round::Up);
        (lo, hi)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.lower() <= 0 && self.upper() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0
    }

    /// Certified sign, or `None` if the ball straddles or touches zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.is_exact() && self.mid.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lower() <= *x && self.upper() >= *x
    }

    /// True when `other` lies inside `self`.
    pub fn contains_ball(&self, other: &RealBall) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        !(self.upper() < other.lower() || other.upper() < self.lower())
    }

    /// Certified comparison: `Some` only when the balls are disjoint.
    pub fn cmp_certified(&self, other: &RealBall) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if other.upper() < self.lower() {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    fn max_prec(&self, other: &RealBall) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> RealBall {
        RealBall {
            mid: Float::with_val(self.prec, -&self.mid),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &RealBall) -> RealBall {
        let prec = self.max_prec(other);
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = add_up(&add_up(&self.rad, &other.rad), &err);
        RealBall { mid, rad, prec }
    }

    pub fn sub(&self, other: &RealBall) -> RealBall {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RealBall) -> RealBall {
        let prec = self.max_prec(other);
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let a = mul_up(&abs_up(&self.mid), &other.rad);
        let b = mul_up(&abs_up(&other.mid), &self.rad);
        let c = mul_up(&self.rad, &other.rad);
        let rad = add_up(&add_up(&add_up(&a, &b), &c), &err);
        RealBall { mid, rad, prec }
    }

    pub fn mul_integer(&self, k: &Integer) -> RealBall {
        self.mul(&RealBall::from_integer(k, self.prec))
    }

    pub fn mul_i64(&self, k: i64) -> RealBall {
        self.mul_integer(&Integer::from(k))
    }

    /// Quotient; `None` if the divisor contains zero.
    pub fn div(&self, other: &RealBall) -> Option<RealBall> {
        if other.contains_zero() {
            return None;
        }
        let prec = self.max_prec(other);
        let (a_lo, a_hi) = (self.lower(), self.upper());
        let (b_lo, b_hi) = (other.lower(), other.upper());
        let p = prec + 2;
        let cands_lo = [
            Float::with_val_round(p, &a_lo / &b_lo, Round::Down).0,
            Float::with_val_round(p, &a_lo / &b_hi, Round::Down).0,
            Float::with_val_round(p, &a_hi / &b_lo, Round::Down).0,
            Float::with_val_round(p, &a_hi / &b_hi, Round::Down).0,
        ];
        let cands_hi = [
            Float::with_val_round(p, &a_lo / &b_lo, Round::Up).0,
            Float::with_val_round(p, &a_lo / &b_hi, Round::Up).0,
            Float::with_val_round(p, &a_hi / &b_lo, Round::Up).0,
            Float::with_val_round(p, &a_hi / &b_hi, Round::Up).0,
        ];
        let lo = cands_lo.iter().min_by(|x, y| x.total_cmp(y)).cloned()?;
        let hi = cands_hi.iter().max_by(|x, y| x.total_cmp(y)).cloned()?;
        Some(RealBall::from_interval(&lo, &hi, prec))
    }

    /// Natural logarithm; `None` unless the ball is strictly positive.
    pub fn ln(&self) -> Option<RealBall> {
        if !self.is_positive() {
            return None;
        }
        let p = self.prec + GUARD_BITS;
        let mut lo = self.lower();
        let mut hi = self.upper();
        lo.set_prec_round(p, Round::Down);
        hi.set_prec_round(p, Round::Up);
        lo.ln_round(Round::Down);
        hi.ln_round(Round::Up);
        Some(RealBall::from_interval(&lo, &hi, self.prec))
    }

    pub fn exp(&self) -> RealBall {
        let p = self.prec + GUARD_BITS;
        let mut lo = self.lower();
        let mut hi = self.upper();
        lo.set_prec_round(p, Round::Down);
        hi.set_prec_round(p, Round::Up);
        lo.exp_round(Round::Down);
        hi.exp_round(Round::Up);
        RealBall::from_interval(&lo, &hi, self.prec)
    }

    /// `self^k` for a nonnegative integer `k`.
    pub fn pow_u32(&self, k: u32) -> RealBall {
        let mut acc = RealBall::one(self.prec);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^y` for a strictly positive base.
    pub fn pow(&self, y: &RealBall) -> Option<RealBall> {
        Some(self.ln()?.mul(y).exp())
    }

    /// Enclosures of `(sin self, cos self)`; both functions are 1-Lipschitz.
    pub fn sin_cos(&self) -> (RealBall, RealBall) {
        let p = self.prec + GUARD_BITS;
        let mut s = Float::with_val(p, &self.mid);
        let mut c = Float::new(p);
        let (os, oc) = s.sin_cos_round(&mut c, Round::Nearest);
        let es = rounding_error(&s, os);
        let ec = rounding_error(&c, oc);
        let sin = RealBall::with_radius(s, &add_up(&self.rad, &es)).clamp_unit();
        let cos = RealBall::with_radius(c, &add_up(&self.rad, &ec)).clamp_unit();
        (sin.with_precision(self.prec), cos.with_precision(self.prec))
    }

    fn clamp_unit(self) -> RealBall {
        // |sin|, |cos| <= 1; radius larger than 2 is meaningless
        if self.rad > 2 {
            let prec = self.prec;
            RealBall {
                mid: Float::new(prec),
                rad: Float::with_val(RADIUS_PREC, 1),
                prec,
            }
        } else {
            self
        }
    }

    /// Rounds the midpoint to `prec` bits, widening the radius accordingly.
    pub fn with_precision(&self, prec: u32) -> RealBall {
        let mut mid = Float::new(prec);
        let ord = mid.assign_round(&self.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        RealBall {
            mid,
            rad: add_up(&self.rad, &err),
            prec,
        }
    }

    /// Widens the radius by `extra` (rounded up).
    pub fn widen(&self, extra: &Float) -> RealBall {
        RealBall {
            mid: self.mid.clone(),
            rad: add_up(&self.rad, &abs_up(extra)),
            prec: self.prec,
        }
    }

    /// Absolute value enclosure.
    pub fn abs(&self) -> RealBall {
        if self.mid.is_sign_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Upper bound on `|x|` over the ball, rounded up.
    pub fn mag_upper(&self) -> Float {
        add_up(&abs_up(&self.mid), &self.rad)
    }

    /// Lower bound on `|x|` over the ball (zero when the ball contains zero).
    pub fn mag_lower(&self) -> Float {
        if self.contains_zero() {
            return zero_rad();
        }
        let m = Float::with_val_round(self.prec + 2, &*self.mid.as_abs(), Round::Down).0;
        Float::with_val_round(RADIUS_PREC, &m - &self.rad, Round::Down).0
    }

    /// Ball containing both inputs.
    pub fn hull(&self, other: &RealBall) -> RealBall {
        let lo = {
            let (a, b) = (self.lower(), other.lower());
            if a < b {
                a
            } else {
                b
            }
        };
        let hi = {
            let (a, b) = (self.upper(), other.upper());
            if a > b {
                a
            } else {
                b
            }
        };
        RealBall::from_interval(&lo, &hi, self.max_prec(other))
    }

    /// Enclosure of `max(x, y)` over members of the two balls.
    pub fn max(&self, other: &RealBall) -> RealBall {
        let (a, b) = (self.lower(), other.lower());
        let lo = if a > b { a } else { b };
        let (a, b) = (self.upper(), other.upper());
        let hi = if a > b { a } else { b };
        RealBall::from_interval(&lo, &hi, self.max_prec(other))
    }

    /// Exact integer value if the ball is a point at an integer.
    pub fn to_exact_integer(&self) -> Option<Integer> {
        if !self.is_exact() || !self.mid.is_integer() {
            return None;
        }
        self.mid.to_integer()
    }

    /// Floor of every member when all members share it.
    pub fn floor_certified(&self) -> Option<Integer> {
        let lo = self.lower().floor().to_integer()?;
        let hi = self.upper().floor().to_integer()?;
        (lo == hi).then_some(lo)
    }

    /// Ceiling of every member when all members share it.
    pub fn ceil_certified(&self) -> Option<Integer> {
        let lo = self.lower().ceil().to_integer()?;
        let hi = self.upper().ceil().to_integer()?;
        (lo == hi).then_some(lo)
    }

    /// Short decimal rendering: midpoint to `digits` significant digits and radius.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mid = self.mid.to_string_radix(10, Some(digits.max(2)));
        if self.rad.is_zero() {
            mid
        } else {
            format!("{mid} +/- {}", self.rad.to_string_radix(10, Some(3)))
        }
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealBall({} @{}b)", self.to_decimal(25), self.prec)
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(20))
    }
}

impl RealBall {
    /// Exact textual form `<prec>:<mid hex>:<rad hex>`.
    pub fn to_hex_string(&self) -> String {
        format!(
            "{}:{}:{}",
            self.prec,
            self.mid.to_string_radix(16, None),
            self.rad.to_string_radix(16, None)
        )
    }

    pub fn from_hex_string(s: &str) -> Option<RealBall> {
        let mut it = s.split(':');
        let prec: u32 = it.next()?.parse().ok()?;
        let mid = Float::parse_radix(it.next()?, 16).ok()?;
        let rad = Float::parse_radix(it.next()?, 16).ok()?;
        if it.next().is_some() || prec == 0 {
            return None;
        }
        let mid = Float::with_val(prec.max(64), mid);
        let rad = Float::with_val_round(RADIUS_PREC, rad, Round::Up).0;
        if rad.is_sign_negative() && !rad.is_zero() {
            return None;
        }
        Some(RealBall { mid, rad, prec })
    }
}

/// Lossless textual form used for serialization (hex mantissas are exact).
#[derive(Serialize, Deserialize)]
struct BallRepr {
    mid: String,
    rad: String,
    prec: u32,
}

impl Serialize for RealBall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BallRepr {
            mid: self.mid.to_string_radix(16, None),
            rad: self.rad.to_string_radix(16, None),
            prec: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealBall {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = BallRepr::deserialize(d)?;
        let mid = Float::parse_radix(&repr.mid, 16)
            .map(|p| Float::with_val(repr.prec, p))
            .map_err(D::Error::custom)?;
        let rad = Float::parse_radix(&repr.rad, 16)
            .map(|p| Float::with_val_round(RADIUS_PREC, p, Round::Up).0)
            .map_err(D::Error::custom)?;
        if rad.is_sign_negative() && !rad.is_zero() {
            return Err(D::Error::custom("negative radius"));
        }
        Ok(RealBall {
            mid,
            rad,
            prec: repr.prec,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(x: f64) -> RealBall {
        RealBall::from_f64(x, 128)
    }

    #[test]
    fn exact_integer_arithmetic_stays_exact() {
        let a = RealBall::from_u64(12, 64);
        let b = RealBall::from_u64(30, 64);
        assert_eq!(a.mul(&b).to_exact_integer(), Some(Integer::from(360)));
        assert_eq!(a.add(&b).to_exact_integer(), Some(Integer::from(42)));
        assert_eq!(a.sub(&b).to_exact_integer(), Some(Integer::from(-18)));
    }

    #[test]
    fn huge_integers_are_not_rounded() {
        let two600 = Integer::from(1) << 600u32;
        let b = RealBall::from_integer(&two600, 64);
        assert_eq!(b.to_exact_integer(), Some(two600));
    }

    #[test]
    fn third_encloses_one_over_three() {
        let third = RealBall::from_rational(&Rational::from((1, 3)), 128);
        assert!(third.contains_rational(&Rational::from((1, 3))));
        assert!(!third.is_exact());
        let back = third.mul_i64(3);
        assert!(back.contains_rational(&Rational::from(1)));
    }

    #[test]
    fn ln_exp_roundtrip_encloses() {
        let x = ball(2.5);
        let y = x.ln().unwrap().exp();
        assert!(y.contains_float(&Float::with_val(53, 2.5)));
        assert!(y.rad() < &Float::with_val(53, 1e-30));
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(ball(0.0).ln().is_none());
        assert!(ball(-1.0).ln().is_none());
    }

    #[test]
    fn div_by_ball_containing_zero_is_none() {
        let z = RealBall::with_radius(Float::with_val(64, 0.5), &Float::with_val(64, 1));
        assert!(ball(1.0).div(&z).is_none());
        let q = ball(1.0).div(&ball(3.0)).unwrap();
        assert!(q.contains_rational(&Rational::from((1, 3))));
    }

    #[test]
    fn sin_cos_of_pi_half() {
        let half_pi = RealBall::pi(128).div(&RealBall::from_u64(2, 128)).unwrap();
        let (s, c) = half_pi.sin_cos();
        assert!(s.contains_float(&Float::with_val(10, 1)));
        assert!(c.contains_float(&Float::with_val(10, 0)));
    }

    #[test]
    fn certified_ceiling_and_floor() {
        let x = RealBall::from_rational(&Rational::from((7, 2)), 64);
        assert_eq!(x.floor_certified(), Some(Integer::from(3)));
        assert_eq!(x.ceil_certified(), Some(Integer::from(4)));
        let wide = RealBall::with_radius(Float::with_val(64, 3), &Float::with_val(64, 0.25));
        assert_eq!(wide.floor_certified(), None);
    }

    #[test]
    fn serde_roundtrip_is_lossless() {
        let x = RealBall::pi(200);
        let s = serde_json::to_string(&x).unwrap();
        let y: RealBall = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
