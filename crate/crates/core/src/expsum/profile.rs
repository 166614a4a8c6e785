//! Representation counts over `S + S` and the DFT identities over indices.

use rayon::prelude::*;
use rug::Integer;
use serde::{Serialize, Serializer};

use super::complex::ComplexBall;
use super::ExpsumError;
use crate::energy::{run_energy, EnergyConfig};
use crate::realcore::{Exponent, RealBall};

/// Precision of the DFT over the index group.
pub const DFT_PREC: u32 = 128;

/// Largest `Q` for which the DFT is evaluated directly.
pub const DFT_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepCountProfile {
    #[serde(rename = "N")]
    pub n: u64,
    pub c_descriptor: String,
    #[serde(rename = "Q")]
    pub q: usize,
    /// `y_1 < ... < y_Q`; empty for profiles given by counts alone.
    #[serde(serialize_with = "balls")]
    pub values: Vec<RealBall>,
    /// Ordered pairs attaining each `y_q`.
    pub phi: Vec<u64>,
}

fn balls<S: Serializer>(v: &[RealBall], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_decimal(20)))
}

impl RepCountProfile {
    /// A profile given only by its counts.
    pub fn from_counts(phi: Vec<u64>) -> Self {
        RepCountProfile {
            n: 0,
            c_descriptor: String::new(),
            q: phi.len(),
            values: Vec::new(),
            phi,
        }
    }

    /// `sum phi = N^2`.
    pub fn total(&self) -> u64 {
        self.phi.iter().sum()
    }

    /// `sum phi^2 = E`.
    pub fn energy(&self) -> u128 {
        self.phi.iter().map(|&p| (p as u128) * (p as u128)).sum()
    }
}

/// Profile from the certified sum classes of the energy engine.
pub fn rep_count_profile(c: &Exponent, n: u64, max_precision: u32) -> Result<RepCountProfile, ExpsumError> {
    let cfg = EnergyConfig {
        collect_classes: true,
        ..EnergyConfig::with_max_precision(max_precision)
    };
    let run = run_energy(c, n, &cfg)?;
    if !run.report.certified {
        return Err(ExpsumError::Unresolved(format!(
            "{} sum comparisons stayed open at {max_precision} bits",
            run.report.unresolved
        )));
    }
    let classes = run.classes.expect("classes were requested");
    Ok(RepCountProfile {
        n,
        c_descriptor: c.to_string(),
        q: classes.len(),
        values: classes.iter().map(|k| k.value.clone()).collect(),
        phi: classes.iter().map(|k| k.ordered_pairs).collect(),
    })
}

/// `e_Q(-k) = e^(-2 pi i k / Q)` for `k < Q`.
fn roots(q: usize, prec: u32) -> Vec<ComplexBall> {
    let two_pi = RealBall::pi(prec).mul_i64(2);
    let qb = RealBall::from_u64(q as u64, prec);
    (0..q)
        .into_par_iter()
        .map(|k| ComplexBall::cis(&two_pi.mul_i64(-(k as i64)).div(&qb).expect("Q > 0")))
        .collect()
}

/// `sum over xi < Q of |sum_q phi(q) e_Q(-q xi)|^2`, which equals `Q sum phi^2`.
fn dft_energy(phi: &[u64], prec: u32) -> Result<RealBall, ExpsumError> {
    let q = phi.len();
    if q == 0 || q > DFT_LIMIT {
        return Err(ExpsumError::TooLarge(format!(
            "the direct DFT needs 1 <= Q <= {DFT_LIMIT}, got {q}"
        )));
    }
    let w = roots(q, prec);
    let parts: Vec<RealBall> = (0..q)
        .into_par_iter()
        .map(|xi| {
            let mut f = ComplexBall::zero(prec);
            for (k, &p) in phi.iter().enumerate() {
                if p != 0 {
                    f = f.add(&w[(k * xi) % q].mul_i64(p as i64));
                }
            }
            f.norm_sqr()
        })
        .collect();
    Ok(parts.iter().fold(RealBall::zero(prec), |acc, b| acc.add(b)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParsevalCheck {
    #[serde(rename = "Q")]
    pub q: usize,
    /// `sum phi(q)^2`
    pub lhs: u128,
    /// `Q sum |phi_hat(xi)|^2`
    pub rhs: String,
    pub residual: f64,
    pub relative_residual: f64,
    /// The certified right side contains the left side.
    pub certified: bool,
}

/// Both sides of Parseval's identity over the cyclic group of indices.
pub fn parseval_check(profile: &RepCountProfile) -> Result<ParsevalCheck, ExpsumError> {
    let lhs = profile.energy();
    let q = profile.q as u64;
    // Q sum |phi_hat|^2 = (1/Q) sum |F|^2
    let rhs = dft_energy(&profile.phi, DFT_PREC)?
        .div(&RealBall::from_u64(q, DFT_PREC))
        .expect("Q > 0");
    let exact = RealBall::from_integer(&Integer::from(lhs), DFT_PREC);
    let residual = rhs.sub(&exact).mid_f64().abs();
    Ok(ParsevalCheck {
        q: profile.q,
        lhs,
        rhs: rhs.to_decimal(20),
        residual,
        relative_residual: if lhs == 0 { residual } else { residual / lhs as f64 },
        certified: rhs.contains_ball(&exact),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FourthMoment {
    #[serde(rename = "N")]
    pub n: u64,
    pub c_descriptor: String,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "E")]
    pub energy: u128,
    /// `Q E`, the moment over the index group.
    pub identity_value: u128,
    /// The same moment by DFT of the profile, when `Q <= 4096`.
    pub identity_dft: Option<String>,
    /// The DFT enclosure contains `Q E` and no other integer.
    pub identity_round_trip: Option<bool>,
    /// `2 N^2 Q`
    pub prediction: u128,
    /// `prediction - identity_value`
    pub difference: i128,
    pub ratio: f64,
    /// `sum over 1 <= xi <= Q of |sum_n e(-n^c xi / Q)|^4`, the display read literally.
    pub as_written: String,
}

fn contains_only_integer(b: &RealBall, k: u128) -> bool {
    let lo = b.lower();
    let hi = b.upper();
    let k = Integer::from(k);
    lo > Integer::from(&k - 1u32) && hi < Integer::from(&k + 1u32) && lo <= k && hi >= k
}

/// `Q E` against `2 N^2 Q`, with the literal real-exponent sum alongside.
pub fn fourth_moment_report(c: &Exponent, n: u64, max_precision: u32) -> Result<FourthMoment, ExpsumError> {
    if n > 256 {
        return Err(ExpsumError::TooLarge(
            "the fourth moment is computed for N <= 256".into(),
        ));
    }
    let profile = rep_count_profile(c, n, max_precision)?;
    let q = profile.q;
    let energy = profile.energy();
    let identity_value = q as u128 * energy;
    let dft = (q <= DFT_LIMIT)
        .then(|| dft_energy(&profile.phi, DFT_PREC))
        .transpose()?;
    let prediction = 2 * (n as u128) * (n as u128) * q as u128;
    let as_written = literal_moment(c, n, q, DFT_PREC)?;
    Ok(FourthMoment {
        n,
        c_descriptor: c.to_string(),
        q,
        energy,
        identity_value,
        identity_round_trip: dft.as_ref().map(|b| contains_only_integer(b, identity_value)),
        identity_dft: dft.map(|b| b.to_decimal(24)),
        prediction,
        difference: prediction as i128 - identity_value as i128,
        ratio: identity_value as f64 / prediction as f64,
        as_written: as_written.to_decimal(20),
    })
}

fn literal_moment(c: &Exponent, n: u64, q: usize, prec: u32) -> Result<RealBall, ExpsumError> {
    let powers = super::sums::powers(c, n, prec)?;
    let qb = RealBall::from_u64(q as u64, prec);
    let parts: Vec<RealBall> = (1..=q as u64)
        .into_par_iter()
        .map(|xi| {
            let t = RealBall::from_u64(xi, prec).div(&qb).expect("Q > 0");
            super::sums::d_with_powers(&powers, &t).norm_sqr().pow_u32(2)
        })
        .collect();
    Ok(parts.iter().fold(RealBall::zero(prec), |acc, b| acc.add(b)))
}
