//! Exhaustive dissociativity check over `{-1, 0, 1}`-signed sums.

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::certificate::{parse_field, Certificate, CertificateKind, Verdict};
use super::DissociationError;
use crate::energy::pairs::{next_down, next_up};
use crate::realcore::{form_enclosure, pow, sign_of_form, CompareConfig, CompareVerdict, Exponent};

/// Largest set enumerated; `3^16` sign vectors.
pub const MAX_SET_SIZE: usize = 16;

const BASE_PREC: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DissociationVariant {
    /// Every nonzero sign vector.
    Full,
    /// Sign vectors with `sum a_n = 0`.
    ZeroSum,
}

/// Sign vector number `idx`: base-3 digits, `1 -> +1`, `2 -> -1`.
fn decode(mut idx: u64, len: usize) -> Vec<i64> {
    (0..len)
        .map(|_| {
            let d = idx % 3;
            idx /= 3;
            match d {
                0 => 0,
                1 => 1,
                _ => -1,
            }
        })
        .collect()
}

fn leads_positive(v: &[i64]) -> bool {
    v.iter().find(|&&a| a != 0) == Some(&1)
}

/// Fold state; every field combines by a minimum or a sum, so the result
/// does not depend on how the work was split.
#[derive(Debug, Clone, Default)]
struct Scan {
    checked: u64,
    /// least `(|mid|, idx)` over certified nonzero sums
    minimal: Option<(f64, u64)>,
    /// least vanishing vector with a positive leading entry
    witness: Option<u64>,
    unresolved: u64,
    first_unresolved: Option<u64>,
    precision: u32,
}

fn min_opt<T: PartialOrd + Copy>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y < x { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Scan {
    fn merge(self, o: Scan) -> Scan {
        Scan {
            checked: self.checked + o.checked,
            minimal: min_opt(self.minimal, o.minimal),
            witness: min_opt(self.witness, o.witness),
            unresolved: self.unresolved + o.unresolved,
            first_unresolved: min_opt(self.first_unresolved, o.first_unresolved),
            precision: self.precision.max(o.precision),
        }
    }
}

fn terms_of(set: &[u64], v: &[i64]) -> Vec<(Integer, u64)> {
    set.iter()
        .zip(v)
        .filter(|(_, &a)| a != 0)
        .map(|(&x, &a)| (Integer::from(a), x))
        .collect()
}

/// Checks that no nonzero signed sum `sum a_n n^c` vanishes.
///
/// Each sum is first bounded with outward-rounded doubles; only sums whose
/// bound contains zero go to the certified comparison.
pub fn check_dissociated(
    set: &[u64],
    c: &Exponent,
    variant: DissociationVariant,
    max_precision: u32,
) -> Result<Certificate, DissociationError> {
    if set.is_empty() || set.len() > MAX_SET_SIZE {
        return Err(DissociationError::InvalidInput(format!(
            "the set needs between 1 and {MAX_SET_SIZE} elements"
        )));
    }
    if set.contains(&0) {
        return Err(DissociationError::InvalidInput("elements must be positive".into()));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(DissociationError::InvalidInput("elements must be distinct".into()));
    }
    let bounds: Vec<(f64, f64)> = set
        .iter()
        .map(|&x| pow(x, c, BASE_PREC).map(|b| b.to_f64_bounds()))
        .collect::<Result<_, _>>()?;
    let cfg = CompareConfig::with_max_precision(max_precision);
    let len = set.len();
    let total = 3u64.pow(len as u32);
    let scan = (1..total)
        .into_par_iter()
        .try_fold(Scan::default, |mut acc, idx| -> Result<Scan, DissociationError> {
            let v = decode(idx, len);
            if variant == DissociationVariant::ZeroSum && v.iter().sum::<i64>() != 0 {
                return Ok(acc);
            }
            acc.checked += 1;
            let (mut lo, mut hi) = (0f64, 0f64);
            for (&a, &(bl, bh)) in v.iter().zip(&bounds) {
                match a {
                    1 => {
                        lo = next_down(lo + bl);
                        hi = next_up(hi + bh);
                    }
                    -1 => {
                        lo = next_down(lo - bh);
                        hi = next_up(hi - bl);
                    }
                    _ => {}
                }
            }
            if lo > 0.0 || hi < 0.0 {
                acc.minimal = min_opt(acc.minimal, Some((((lo + hi) / 2.0).abs(), idx)));
                acc.precision = acc.precision.max(BASE_PREC);
                return Ok(acc);
            }
            match sign_of_form(&terms_of(set, &v), c, &cfg)? {
                CompareVerdict::Less | CompareVerdict::Greater => {
                    let (l, h) = form_enclosure(&terms_of(set, &v), c, BASE_PREC)?.to_f64_bounds();
                    acc.minimal = min_opt(acc.minimal, Some((((l + h) / 2.0).abs(), idx)));
                    acc.precision = acc.precision.max(BASE_PREC);
                }
                CompareVerdict::CertifiedEqual { .. } => {
                    if leads_positive(&v) {
                        acc.witness = min_opt(acc.witness, Some(idx));
                    }
                }
                CompareVerdict::Unresolved { precision_reached } => {
                    acc.unresolved += 1;
                    acc.first_unresolved = min_opt(acc.first_unresolved, Some(idx));
                    acc.precision = acc.precision.max(precision_reached);
                }
            }
            Ok(acc)
        })
        .try_reduce(Scan::default, |a, b| Ok(a.merge(b)))?;

    let minimal = match scan.minimal {
        Some((_, idx)) => {
            let v = decode(idx, len);
            let ball = form_enclosure(&terms_of(set, &v), c, BASE_PREC)?;
            json!({ "vector": v, "enclosure": ball.to_decimal(20) })
        }
        None => Value::Null,
    };
    let witness = scan.witness.map(|idx| decode(idx, len));
    let verdict = if witness.is_some() {
        Verdict::NotDissociated
    } else if scan.unresolved > 0 {
        Verdict::Unresolved
    } else {
        Verdict::Dissociated
    };
    let witness_kind = match &witness {
        Some(w) => match sign_of_form(&terms_of(set, w), c, &cfg)? {
            CompareVerdict::CertifiedEqual { witness } => serde_json::to_value(witness).expect("serializes"),
            _ => Value::Null,
        },
        None => Value::Null,
    };
    let inputs = json!({
        "set": set,
        "exponent": c.to_string(),
        "variant": variant,
        "max_precision": max_precision,
    });
    let evidence = json!({
        "sign_vectors_checked": scan.checked,
        "minimal": minimal,
        "witness": witness,
        "witness_kind": witness_kind,
        "unresolved": scan.unresolved,
        "first_unresolved": scan.first_unresolved.map(|idx| decode(idx, len)),
    });
    Ok(Certificate::new(
        CertificateKind::Dissociated,
        inputs,
        verdict,
        evidence,
        scan.precision,
    ))
}

pub(crate) fn recheck_inputs(inputs: &Value) -> Result<Certificate, DissociationError> {
    let set: Vec<u64> = parse_field(inputs, "set")?;
    let exponent: String = parse_field(inputs, "exponent")?;
    let variant: DissociationVariant = parse_field(inputs, "variant")?;
    let max_precision: u32 = parse_field(inputs, "max_precision")?;
    check_dissociated(&set, &exponent.parse()?, variant, max_precision)
}
