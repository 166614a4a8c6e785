//! Linear forms `sum a_i x_i^c` and their nonvanishing certificates.

use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use super::certificate::{parse_field, Certificate, CertificateKind, Verdict};
use super::DissociationError;
use crate::realcore::{
    combine_terms, exact_zero_test, form_enclosure, pow, sign_of_form_by, CompareConfig, CompareVerdict, ExactOutcome,
    Exponent, RationalExponent, RealBall,
};

/// Precision of the decomposition diagnostics.
pub const DIAGNOSTIC_PREC: u32 = 256;

/// Largest denominator tried when looking for a nearby rational.
const APPROX_MAX_DENOM: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    coefficients: Vec<i64>,
    points: Vec<u64>,
    exponent: Exponent,
}

impl LinearForm {
    pub fn new(coefficients: Vec<i64>, points: Vec<u64>, exponent: Exponent) -> Result<Self, DissociationError> {
        if coefficients.is_empty() || coefficients.len() != points.len() {
            return Err(DissociationError::InvalidInput(
                "need as many coefficients as points, at least one".into(),
            ));
        }
        if coefficients.iter().all(|&a| a == 0) {
            return Err(DissociationError::InvalidInput("all coefficients are zero".into()));
        }
        if points.contains(&0) {
            return Err(DissociationError::InvalidInput("points must be positive".into()));
        }
        Ok(LinearForm {
            coefficients,
            points,
            exponent,
        })
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn exponent(&self) -> &Exponent {
        &self.exponent
    }

    /// Number of terms `s`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `A = max |a_i|`.
    pub fn height(&self) -> u64 {
        self.coefficients.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0)
    }

    /// `N = max x_i`.
    pub fn max_point(&self) -> u64 {
        self.points.iter().copied().max().unwrap_or(1)
    }

    /// Coefficients merged by point, zeros dropped.
    pub fn terms(&self) -> Vec<(Integer, u64)> {
        let lhs: Vec<(i64, u64)> = self
            .coefficients
            .iter()
            .copied()
            .zip(self.points.iter().copied())
            .collect();
        combine_terms(&lhs, &[])
    }

    pub fn enclosure(&self, prec: u32) -> Result<RealBall, DissociationError> {
        Ok(form_enclosure(&self.terms(), &self.exponent, prec)?)
    }
}

/// The split `y = alpha + eps Lambda + sum a_i x_i^(a/q) R(x_i, eps)` around
/// `c = a/q + eps`, where `R(x, eps) = x^eps - 1 - eps log x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub approximant: String,
    pub epsilon: String,
    pub alpha: String,
    pub lambda: String,
    /// `alpha_zero`, `alpha_nonzero`, or `undetermined`.
    pub case: String,
    /// `y - alpha - eps Lambda`.
    pub remainder: String,
    /// `A N^c s eps^2`, as stated.
    pub remainder_bound_stated: String,
    /// `sum |a_i| x_i^(a/q) (eps log x_i)^2 x_i^|eps| / 2`.
    pub remainder_bound_corrected: String,
    pub stated_bound_holds: Option<bool>,
    pub corrected_bound_holds: Option<bool>,
}

fn dec(b: &RealBall) -> String {
    b.to_decimal(20)
}

/// Certified `|r| <= bound`, `|r| > bound`, or unknown.
fn bound_holds(r: &RealBall, bound: &RealBall) -> Option<bool> {
    if r.mag_upper() <= bound.lower() {
        Some(true)
    } else if r.mag_lower() > bound.upper() {
        Some(false)
    } else {
        None
    }
}

/// Smallest-denominator `a/q` (with `q <= 64`) within `10^-3` of `c`.
pub fn nearby_rational(c: &Exponent) -> Option<RationalExponent> {
    if let Exponent::Rational(r) = c {
        return Some(*r);
    }
    let mid = c.enclosure(128).ok()?.mid().to_rational()?;
    let tol = Rational::from((1, 1000));
    (1..=APPROX_MAX_DENOM).find_map(|q| {
        let a = Rational::from(&mid * q).round().numer().to_i64()?;
        let eps = (&mid - Rational::from((a, q))).abs();
        (eps < tol).then(|| RationalExponent::new(a, q).ok()).flatten()
    })
}

/// Decomposition diagnostics of `form` around `r`.
pub fn decomposition(form: &LinearForm, r: RationalExponent) -> Result<Decomposition, DissociationError> {
    let p = DIAGNOSTIC_PREC;
    let terms = form.terms();
    let re = Exponent::Rational(r);
    let eps = form
        .exponent
        .enclosure(p)?
        .sub(&RealBall::from_rational(&r.to_rational(), p));
    let abs_eps = eps.abs();
    let mut alpha = RealBall::zero(p);
    let mut lambda = RealBall::zero(p);
    let mut corrected = RealBall::zero(p);
    let half = RealBall::from_rational(&Rational::from((1, 2)), p);
    for (k, x) in &terms {
        let xr = pow(*x, &re, p)?;
        let ln = RealBall::from_u64(*x, p).ln().expect("x >= 1");
        alpha = alpha.add(&xr.mul_integer(k));
        lambda = lambda.add(&xr.mul(&ln).mul_integer(k));
        let grow = RealBall::from_u64(*x, p).pow(&abs_eps).expect("x >= 1");
        let term = xr
            .mul(&eps.mul(&ln).pow_u32(2))
            .mul(&grow)
            .mul(&half)
            .mul_integer(&k.clone().abs());
        corrected = corrected.add(&term);
    }
    let y = form.enclosure(p)?;
    let remainder = y.sub(&alpha).sub(&eps.mul(&lambda));
    let n_c = pow(form.max_point(), &form.exponent, p)?;
    let stated = RealBall::from_u64(form.height(), p)
        .mul(&n_c)
        .mul(&RealBall::from_u64(terms.len() as u64, p))
        .mul(&eps.pow_u32(2));
    let case = match exact_zero_test(&terms, &re) {
        Some(ExactOutcome::Zero(_)) => "alpha_zero",
        Some(ExactOutcome::NonZero) => "alpha_nonzero",
        None if !alpha.contains_zero() => "alpha_nonzero",
        None => "undetermined",
    };
    Ok(Decomposition {
        approximant: re.to_string(),
        epsilon: dec(&eps),
        alpha: dec(&alpha),
        lambda: dec(&lambda),
        case: case.to_string(),
        stated_bound_holds: bound_holds(&remainder, &stated),
        corrected_bound_holds: bound_holds(&remainder, &corrected),
        remainder: dec(&remainder),
        remainder_bound_stated: dec(&stated),
        remainder_bound_corrected: dec(&corrected),
    })
}

/// Certifies `sum a_i x_i^c != 0`, or that it vanishes exactly, using the
/// nearest small-denominator rational for the diagnostics.
pub fn verify_nonvanishing(form: &LinearForm, max_precision: u32) -> Result<Certificate, DissociationError> {
    let approx = nearby_rational(&form.exponent);
    verify_nonvanishing_near(form, max_precision, approx)
}

/// As [`verify_nonvanishing`] with an explicit approximant (or none).
pub fn verify_nonvanishing_near(
    form: &LinearForm,
    max_precision: u32,
    approximant: Option<RationalExponent>,
) -> Result<Certificate, DissociationError> {
    let terms = form.terms();
    let cfg = CompareConfig::with_max_precision(max_precision);
    let mut last: Option<RealBall> = None;
    let verdict = sign_of_form_by(&terms, &form.exponent, &cfg, |prec| {
        let b = form_enclosure(&terms, &form.exponent, prec)?;
        last = Some(b.clone());
        Ok(b)
    })?;
    let inputs = json!({
        "coefficients": form.coefficients,
        "points": form.points,
        "exponent": form.exponent.to_string(),
        "max_precision": max_precision,
        "approximant": approximant.map(|r| Exponent::Rational(r).to_string()),
    });
    let enclosure = |b: &Option<RealBall>| match b {
        Some(b) => json!({ "decimal": dec(b), "hex": b.to_hex_string() }),
        None => Value::Null,
    };
    let (v, evidence, precision) = match &verdict {
        CompareVerdict::Less | CompareVerdict::Greater => {
            let ball = last.as_ref().expect("an interval decided the sign");
            let sign = if verdict == CompareVerdict::Less {
                "negative"
            } else {
                "positive"
            };
            let diagnostics = approximant
                .map(|r| decomposition(form, r))
                .transpose()?
                .map(|d| serde_json::to_value(d).expect("serializes"));
            let ev = json!({
                "sign": sign,
                "enclosure": enclosure(&last),
                "diagnostics": diagnostics,
            });
            (Verdict::Nonvanishing, ev, ball.precision())
        }
        CompareVerdict::CertifiedEqual { witness } => (Verdict::ZeroCertified, json!({ "witness": witness }), 0),
        CompareVerdict::Unresolved { precision_reached } => (
            Verdict::Unresolved,
            json!({ "enclosure": enclosure(&last) }),
            *precision_reached,
        ),
    };
    Ok(Certificate::new(
        CertificateKind::Nonvanishing,
        inputs,
        v,
        evidence,
        precision,
    ))
}

pub(crate) fn recheck_inputs(inputs: &Value) -> Result<Certificate, DissociationError> {
    let coefficients: Vec<i64> = parse_field(inputs, "coefficients")?;
    let points: Vec<u64> = parse_field(inputs, "points")?;
    let exponent: String = parse_field(inputs, "exponent")?;
    let max_precision: u32 = parse_field(inputs, "max_precision")?;
    let approximant: Option<String> = parse_field(inputs, "approximant")?;
    let c: Exponent = exponent.parse()?;
    let approx = match approximant {
        Some(s) => match s.parse::<Exponent>()? {
            Exponent::Rational(r) => Some(r),
            _ => return Err(DissociationError::Certificate("approximant is not rational".into())),
        },
        None => None,
    };
    verify_nonvanishing_near(&LinearForm::new(coefficients, points, c)?, max_precision, approx)
}
