//! Certified comparison of sums `sum coeff_i x_i^c`.

use std::collections::BTreeMap;

use rug::Integer;
use serde::Serialize;

use super::ball::RealBall;
use super::error::RealError;
use super::exact::{exact_zero_test, EqualityWitness, ExactOutcome};
use super::exponent::{pow_eval, Exponent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CompareVerdict {
    Less,
    Greater,
    CertifiedEqual { witness: EqualityWitness },
    Unresolved { precision_reached: u32 },
}

impl CompareVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, CompareVerdict::CertifiedEqual { .. })
    }

    pub fn is_resolved(&self) -> bool {
        !matches!(self, CompareVerdict::Unresolved { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareConfig {
    pub initial_precision: u32,
    pub max_precision: u32,
    /// Allow exact (non-interval) certification. Disabling it leaves every
    /// equal case unresolved, since overlapping intervals never prove equality.
    pub exact_paths: bool,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            initial_precision: 128,
            max_precision: 4096,
            exact_paths: true,
        }
    }
}

impl CompareConfig {
    pub fn with_max_precision(max_precision: u32) -> Self {
        CompareConfig {
            max_precision: max_precision.max(32),
            initial_precision: 128.min(max_precision.max(32)),
            ..Default::default()
        }
    }
}

/// Net coefficients of `lhs - rhs`, combined by base and without zeros.
pub fn combine_terms(lhs: &[(i64, u64)], rhs: &[(i64, u64)]) -> Vec<(Integer, u64)> {
    let mut net: BTreeMap<u64, Integer> = BTreeMap::new();
    for &(k, x) in lhs {
        *net.entry(x).or_default() += k;
    }
    for &(k, x) in rhs {
        *net.entry(x).or_default() -= k;
    }
    net.into_iter().filter(|(_, k)| *k != 0).map(|(x, k)| (k, x)).collect()
}

/// Enclosure of `sum coeff x^c` at `prec` bits.
pub fn form_enclosure(terms: &[(Integer, u64)], c: &Exponent, prec: u32) -> Result<RealBall, RealError> {
    let eval = c.evaluator(prec)?;
    let mut acc = RealBall::zero(prec);
    for (k, x) in terms {
        acc = acc.add(&pow_eval(*x, &eval, prec).mul_integer(k));
    }
    Ok(acc)
}

/// Decides the sign of `lhs - rhs` with the default configuration.
pub fn compare_sums(
    lhs: &[(i64, u64)],
    rhs: &[(i64, u64)],
    c: &Exponent,
    max_precision: u32,
) -> Result<CompareVerdict, RealError> {
    compare_sums_with(lhs, rhs, c, &CompareConfig::with_max_precision(max_precision))
}

pub fn compare_sums_with(
    lhs: &[(i64, u64)],
    rhs: &[(i64, u64)],
    c: &Exponent,
    cfg: &CompareConfig,
) -> Result<CompareVerdict, RealError> {
    if lhs.iter().chain(rhs).any(|&(_, x)| x == 0) {
        return Err(RealError::OutOfRange("bases must be at least 1".into()));
    }
    let terms = combine_terms(lhs, rhs);
    sign_of_form(&terms, c, cfg)
}

/// Sign of `sum coeff x^c` against zero.
pub fn sign_of_form(terms: &[(Integer, u64)], c: &Exponent, cfg: &CompareConfig) -> Result<CompareVerdict, RealError> {
    sign_of_form_by(terms, c, cfg, |prec| form_enclosure(terms, c, prec))
}

/// As [`sign_of_form`], with the enclosure at each precision supplied by the
/// caller (for example from cached powers).
pub fn sign_of_form_by<F>(
    terms: &[(Integer, u64)],
    c: &Exponent,
    cfg: &CompareConfig,
    mut enclose: F,
) -> Result<CompareVerdict, RealError>
where
    F: FnMut(u32) -> Result<RealBall, RealError>,
{
    if cfg.exact_paths {
        if terms.is_empty() {
            return Ok(CompareVerdict::CertifiedEqual {
                witness: EqualityWitness::Syntactic,
            });
        }
        match exact_zero_test(terms, c) {
            Some(ExactOutcome::Zero(witness)) => return Ok(CompareVerdict::CertifiedEqual { witness }),
            Some(ExactOutcome::NonZero) | None => {}
        }
    }
    let mut prec = cfg.initial_precision.max(32);
    loop {
        let ball = enclose(prec)?;
        if ball.is_positive() {
            return Ok(CompareVerdict::Greater);
        }
        if ball.is_negative() {
            return Ok(CompareVerdict::Less);
        }
        if prec >= cfg.max_precision {
            return Ok(CompareVerdict::Unresolved {
                precision_reached: prec,
            });
        }
        prec = (prec * 2).min(cfg.max_precision);
    }
}
