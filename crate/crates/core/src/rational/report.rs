//! Tables comparing exact counts `B(a/q, N)` with the stated main terms.

use rug::Rational;
use serde::Serialize;

use super::counting::{displayed_cube_sum, reduce_rational_count, reduce_rational_count_unrestricted};
use super::sums::zeta;
use super::RationalError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticRow {
    #[serde(rename = "N")]
    pub n: u64,
    /// Sum over `q`-th-power-free `b`; agrees with direct enumeration.
    pub exact: u64,
    /// Sum over every `b <= N`.
    pub unrestricted: u64,
    /// `sum floor((N/b)^(1/q))^3`, the displayed closed form.
    pub displayed_cube_sum: u64,
    /// Main term as stated, when one is stated for this exponent.
    pub prediction: Option<f64>,
    pub ratio: Option<f64>,
    /// `exact / scale` with `scale = N^(3/2)` for `q = 2` and `N log N` for `q = 3`.
    pub normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub a: i64,
    pub q: u64,
    pub main_term: String,
    /// Constant the normalized column is expected to approach, as stated.
    pub stated_constant: Option<f64>,
    pub rows: Vec<AsymptoticRow>,
}

impl AsymptoticReport {
    pub const CSV_HEADER: &'static str = "N,exact,unrestricted,displayed_cube_sum,prediction,ratio,normalized";

    pub fn csv_rows(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.9}")).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.exact,
                    r.unrestricted,
                    r.displayed_cube_sum,
                    opt(r.prediction),
                    opt(r.ratio),
                    opt(r.normalized)
                )
            })
            .collect()
    }
}

/// Rows `(N, B, prediction, ratio)`. Main terms exist for `1/2`
/// (`zeta(3/2) N^(3/2)`) and `1/3` (`N log N`); other pairs report counts only.
pub fn rational_asymptotic_report(a: i64, q: u64, ns: &[u64]) -> Result<AsymptoticReport, RationalError> {
    let zeta32 = zeta(&Rational::from((3, 2)), 64)?.mid_f64();
    let (main_term, constant) = match (a, q) {
        (1, 2) => ("zeta(3/2) N^(3/2)", Some(zeta32)),
        (1, 3) => ("N log N", Some(1.0)),
        _ => ("none stated", None),
    };
    let rows = ns
        .iter()
        .map(|&n| {
            let exact = reduce_rational_count(a, q, n)?;
            let nf = n as f64;
            let scale = match (a, q) {
                (1, 2) => Some(nf.powf(1.5)),
                (1, 3) => Some(nf * nf.ln()),
                _ => None,
            };
            let prediction = scale.zip(constant).map(|(s, k)| s * k);
            Ok(AsymptoticRow {
                n,
                exact,
                unrestricted: reduce_rational_count_unrestricted(a, q, n)?,
                displayed_cube_sum: displayed_cube_sum(q, n),
                prediction,
                ratio: prediction.filter(|p| *p > 0.0).map(|p| exact as f64 / p),
                normalized: scale.filter(|s| *s > 0.0).map(|s| exact as f64 / s),
            })
        })
        .collect::<Result<_, RationalError>>()?;
    Ok(AsymptoticReport {
        a,
        q,
        main_term: main_term.to_string(),
        stated_constant: constant,
        rows,
    })
}
