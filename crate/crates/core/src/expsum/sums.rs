//! `D(t) = sum over n <= N of e(-n^c t)` and the large-values count.

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::complex::ComplexBall;
use super::ExpsumError;
use crate::energy::{sumset_size, SumsetSize};
use crate::realcore::{pow, Exponent, RealBall};

/// Base precision of the phase evaluations.
pub const PHASE_PREC: u32 = 128;

pub(crate) fn powers(c: &Exponent, n: u64, prec: u32) -> Result<Vec<RealBall>, ExpsumError> {
    (1..=n).map(|x| Ok(pow(x, c, prec)?)).collect()
}

/// `sum e^(-2 pi i p t)` over the given powers `p`.
pub(crate) fn d_with_powers(powers: &[RealBall], t: &RealBall) -> ComplexBall {
    let prec = t.precision();
    if t.is_exact() && t.mid().is_zero() {
        return ComplexBall {
            re: RealBall::from_u64(powers.len() as u64, prec),
            im: RealBall::zero(prec),
        };
    }
    let minus_two_pi_t = RealBall::pi(prec).mul_i64(-2).mul(t);
    powers.iter().fold(ComplexBall::zero(prec), |acc, p| {
        acc.add(&ComplexBall::cis(&p.mul(&minus_two_pi_t)))
    })
}

/// Enclosure of `D(t)` at `prec` bits; `D(0) = N` exactly.
pub fn exp_sum_d(c: &Exponent, n: u64, t: &RealBall, prec: u32) -> Result<ComplexBall, ExpsumError> {
    if n == 0 {
        return Err(ExpsumError::InvalidInput("N must be at least 1".into()));
    }
    Ok(d_with_powers(&powers(c, n, prec)?, &t.with_precision(prec)))
}

#[derive(Debug, Clone, Serialize)]
pub struct LargeValues {
    #[serde(rename = "N")]
    pub n: u64,
    pub c_descriptor: String,
    #[serde(rename = "Q")]
    pub q: u64,
    #[serde(rename = "V")]
    pub v: String,
    /// `a <= Q` with `|D(a/Q)| >= V` certified.
    pub count: u64,
    /// `a` left undecided at the maximum precision.
    pub undecided: u64,
    /// `(N/V)^4`
    pub bound: f64,
    /// `count / (N/V)^4`
    pub ratio: f64,
}

impl LargeValues {
    pub const CSV_HEADER: &'static str = "N,Q,V,count,undecided,bound,ratio";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.9},{:.9}",
            self.n, self.q, self.v, self.count, self.undecided, self.bound, self.ratio
        )
    }
}

/// Counts `a in [1, Q]` with `|D(a/Q)| >= V`, `Q = |S + S|`.
pub fn large_values_count(c: &Exponent, n: u64, v: &Rational, max_precision: u32) -> Result<LargeValues, ExpsumError> {
    if *v <= 0 {
        return Err(ExpsumError::InvalidInput("V must be positive".into()));
    }
    let q = match sumset_size(c, n, max_precision)? {
        SumsetSize::Exact { value } => value,
        SumsetSize::Interval { .. } => {
            return Err(ExpsumError::Unresolved("|S + S| is not certified".into()));
        }
    };
    let (count, undecided) = if *v > n {
        (0, 0)
    } else {
        let mut pending: Vec<u64> = (1..=q).collect();
        let mut count = 0u64;
        let mut prec = PHASE_PREC;
        loop {
            let pw = powers(c, n, prec)?;
            let v2 = RealBall::from_rational(&Rational::from(v * v), prec);
            let qr = Rational::from(q);
            let verdicts: Vec<Option<bool>> = pending
                .par_iter()
                .map(|&a| {
                    let t = RealBall::from_rational(&(Rational::from(a) / &qr), prec);
                    let m = d_with_powers(&pw, &t).norm_sqr();
                    if m.lower() >= v2.upper() {
                        Some(true)
                    } else if m.upper() < v2.lower() {
                        Some(false)
                    } else {
                        None
                    }
                })
                .collect();
            count += verdicts.iter().filter(|d| **d == Some(true)).count() as u64;
            pending = pending
                .iter()
                .zip(&verdicts)
                .filter(|(_, d)| d.is_none())
                .map(|(&a, _)| a)
                .collect();
            if pending.is_empty() || prec >= max_precision {
                break (count, pending.len() as u64);
            }
            prec = (prec * 2).min(max_precision);
        }
    };
    let vf = v.to_f64();
    let bound = (n as f64 / vf).powi(4);
    Ok(LargeValues {
        n,
        c_descriptor: c.to_string(),
        q,
        v: if *v.denom() == 1 {
            v.numer().to_string()
        } else {
            v.to_string()
        },
        count,
        undecided,
        bound,
        ratio: count as f64 / bound,
    })
}
