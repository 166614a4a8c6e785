//! Dispatch of a [`RunSpec`] to the owning module. Every value is read back
//! from the canonical parameters, so equal specs give equal reports.

use powerset_core::dissociation::{
    self as diss, check_dissociated, digit_positions, digit_query, recheck, relation_certificate, verify_nonvanishing,
    verify_nonvanishing_near, Certificate, DissociationError, DissociationVariant, LinearForm, BOUND_PREC,
};
use powerset_core::energy::{
    additive_energy, construct_sporadic, construct_three_ap, sumset_size, EnergyError, EnergyReport, SumsetSize,
};
use powerset_core::expsum::{
    exp_sum_d, fourth_moment_report, large_values_count, parseval_check, rep_count_profile, window_pair_count,
    ExpsumError, LargeValues, RepCountProfile, WindowTarget,
};
use powerset_core::rational::{
    brute_force_rational_counts, negative_census, partial_sum, rational_asymptotic_report, stated_count,
    AsymptoticReport, RationalError,
};
use powerset_core::realcore::exponent::parse_rational;
use powerset_core::realcore::{
    DigitAnswer, DigitSequence, Exponent, LogMagnitude, RationalExponent, RealBall, RealError, Sign,
};
use powerset_core::{Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::spec::RunSpec;
use crate::{CliError, SCHEMA_VERSION};

/// A report as JSON, with a dedicated CSV table where one exists.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    fn new<T: Serialize>(body: &T, certified: bool) -> Report {
        let mut json = serde_json::to_value(body).expect("report serializes");
        let obj = json.as_object_mut().expect("reports are objects");
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("certified".into(), json!(certified));
        Report { json, csv: None }
    }

    fn with_csv(mut self, header: &str, rows: impl IntoIterator<Item = String>) -> Report {
        let mut out = format!("{header}\n");
        for r in rows {
            out.push_str(&r);
            out.push('\n');
        }
        self.csv = Some(out);
        self
    }
}

impl From<RealError> for CliError {
    fn from(e: RealError) -> Self {
        match e {
            RealError::InvalidExponent(_) | RealError::OutOfRange(_) => CliError::Usage(e.to_string()),
            _ => CliError::Unresolved(e.to_string()),
        }
    }
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> Self {
        match e {
            EnergyError::Real(r) => r.into(),
            EnergyError::Io(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<RationalError> for CliError {
    fn from(e: RationalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<DissociationError> for CliError {
    fn from(e: DissociationError) -> Self {
        match e {
            DissociationError::Real(r) => r.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ExpsumError> for CliError {
    fn from(e: ExpsumError) -> Self {
        match e {
            ExpsumError::Energy(x) => x.into(),
            ExpsumError::Real(x) => x.into(),
            ExpsumError::Unresolved(m) => CliError::Unresolved(m),
            ExpsumError::InvalidInput(_) | ExpsumError::TooLarge(_) => CliError::Usage(e.to_string()),
        }
    }
}

fn exponent(spec: &RunSpec) -> Result<Exponent, CliError> {
    spec.get::<Exponent>("c")
}

fn rational(spec: &RunSpec, key: &str) -> Result<Rational, CliError> {
    let s = spec.str(key)?;
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("parameter `{key}`: not a number: `{s}`")))
}

fn real(spec: &RunSpec, key: &str) -> Result<RealBall, CliError> {
    Ok(RealBall::from_rational(&rational(spec, key)?, BOUND_PREC))
}

fn integer_param(spec: &RunSpec, key: &str) -> Result<u64, CliError> {
    let r = rational(spec, key)?;
    if *r.denom() != 1 {
        return Err(CliError::Usage(format!("parameter `{key}` must be an integer")));
    }
    r.numer()
        .to_u64()
        .ok_or_else(|| CliError::Usage(format!("parameter `{key}` out of range")))
}

pub fn execute(spec: &RunSpec) -> Result<Report, CliError> {
    let p = spec.precision;
    match spec.subcommand.as_str() {
        "energy" => {
            let r = additive_energy(&exponent(spec)?, spec.get("N")?, p)?;
            let certified = r.certified;
            Ok(Report::new(&r, certified).with_csv(EnergyReport::CSV_HEADER, [r.to_csv_row()]))
        }
        "sumset" => {
            let c = exponent(spec)?;
            let n: u64 = spec.get("N")?;
            let s = sumset_size(&c, n, p)?;
            let certified = matches!(s, SumsetSize::Exact { .. });
            let body = json!({ "N": n, "c_descriptor": c.to_string(), "sumset": s });
            Ok(Report::new(&body, certified))
        }
        "sporadic" => {
            let n: u64 = spec.get("n")?;
            let s = match spec.str("family")? {
                "three-ap" => construct_three_ap(n)?,
                _ => construct_sporadic(n)?,
            };
            let certified = s.verdict.is_equal();
            Ok(Report::new(&s, certified))
        }
        "rational" => rational_report(spec),
        "negative" => {
            let n: u64 = spec.get("n")?;
            let big_n: u64 = spec.get("N")?;
            let census = negative_census(n, big_n)?;
            let body = json!({
                "n": n,
                "N": big_n,
                "generators": negative_generators(n),
                "count": census.generator_multiples,
                "stated_count": stated_count(n, big_n),
                "classification_holds": census.violations == 0,
                "census": census,
            });
            Ok(Report::new(&body, true))
        }
        "partial-sum" => {
            let r = partial_sum(&rational(spec, "alpha")?, spec.get("N")?)?;
            Ok(Report::new(&r, true))
        }
        "bounds" => bounds(spec),
        "digits" => digits(spec),
        "dissociate" => {
            let set: Vec<u64> = spec.list("set")?;
            let cert = if spec.str("mode")? == "multiplicative" {
                relation_certificate(&set)?
            } else {
                let variant = match spec.str("variant")? {
                    "zero-sum" => DissociationVariant::ZeroSum,
                    _ => DissociationVariant::Full,
                };
                check_dissociated(&set, &exponent(spec)?, variant, p)?
            };
            Ok(certificate_report(cert))
        }
        "verify-form" => {
            let form = LinearForm::new(spec.list("coeffs")?, spec.list("points")?, exponent(spec)?)?;
            let cert = match spec.opt::<String>("approximant")? {
                Some(_) => {
                    let r = rational(spec, "approximant")?;
                    let a = r
                        .numer()
                        .to_i64()
                        .ok_or_else(|| CliError::Usage("approximant too large".into()))?;
                    let q = r
                        .denom()
                        .to_u64()
                        .ok_or_else(|| CliError::Usage("approximant too large".into()))?;
                    verify_nonvanishing_near(&form, p, Some(RationalExponent::new(a, q)?))?
                }
                None => verify_nonvanishing(&form, p)?,
            };
            Ok(certificate_report(cert))
        }
        "expsum" => expsum(spec),
        "recheck-certificate" => {
            let path = spec.str("path")?;
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            let digest = {
                use sha2::{Digest, Sha256};
                hex::encode(Sha256::digest(text.as_bytes()))
            };
            if digest != spec.str("sha256")? {
                return Err(CliError::Usage(format!("{path} changed after the run was specified")));
            }
            let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            // accepts a bare certificate or a `dissociate` / `verify-form` report
            let inner = value.get("certificate").cloned().unwrap_or(value);
            let cert = Certificate::from_json(&inner.to_string())?;
            let r = recheck(&cert)?;
            let ok = r.ok();
            let body = json!({ "hash": cert.hash, "kind": cert.kind, "verdict": cert.verdict, "recheck": r, "ok": ok });
            Ok(Report::new(&body, ok))
        }
        other => Err(CliError::Usage(format!("unknown subcommand `{other}`"))),
    }
}

fn negative_generators(n: u64) -> Vec<[u64; 4]> {
    powerset_core::rational::generators(n).to_vec()
}

fn certificate_report(cert: Certificate) -> Report {
    let certified = !cert.verdict.is_unresolved();
    let body = json!({ "certificate": cert });
    Report::new(&body, certified)
}

fn rational_report(spec: &RunSpec) -> Result<Report, CliError> {
    let a: i64 = spec.get("a")?;
    let q: u64 = spec.get("q")?;
    let ns: Vec<u64> = spec.list("N")?;
    let r: AsymptoticReport = rational_asymptotic_report(a, q, &ns)?;
    let rows = r.csv_rows();
    let mut report = Report::new(&r, true);
    if spec.get::<bool>("brute_force")? {
        let max = ns.iter().copied().max().unwrap_or(0);
        let direct = brute_force_rational_counts(a, q, max)?;
        let agrees = r
            .rows
            .iter()
            .all(|row| direct.get(row.n as usize).copied() == Some(row.exact));
        report.json["brute_force_agrees"] = json!(agrees);
        report.json["certified"] = json!(agrees);
    }
    Ok(report.with_csv(AsymptoticReport::CSV_HEADER, rows))
}

fn magnitude_json(m: &LogMagnitude) -> Value {
    let sign = match m.sign {
        Sign::Positive => "positive",
        Sign::Negative => "negative",
        Sign::Zero => "zero",
    };
    let exact = m.log_value.to_exact_integer().map(|i| i.to_string());
    json!({
        "sign": sign,
        "value": m.describe(),
        "log_value": m.log_value.describe(30),
        "log_value_exact": exact,
        "log10_abs_log_value": m.log_value.approx_log10_abs(),
        "tower": m.is_tower(),
    })
}

fn bounds(spec: &RunSpec) -> Result<Report, CliError> {
    let kind = spec.str("kind")?;
    let n_real = || real(spec, "N");
    let n_int = || integer_param(spec, "N");
    let m = match kind {
        "psi" => diss::psi_log(
            spec.get("A")?,
            n_int()?,
            spec.get("s")?,
            spec.get("q")?,
            &real(spec, "c8")?,
        )?,
        "baker-wustholz" => diss::baker_wustholz_log(spec.get("m")?, &n_real()?)?,
        "c0" => diss::c0_log(spec.get("m")?, &n_real()?)?,
        "rational-threshold" => diss::rational_threshold_log(
            spec.get("m")?,
            n_int()?,
            spec.get("a")?,
            spec.get("q")?,
            &real(spec, "c")?,
        )?,
        "alpha-lower" => diss::alpha_lower_log(spec.get("m")?, n_int()?, &rational(spec, "r")?, spec.get("q")?)?,
        "prime-corollary" => diss::prime_corollary_log(&real(spec, "c")?, spec.get("q")?, n_int()?)?,
        "feldman" => diss::feldman_log_bound(
            spec.get("s")?,
            spec.get("q")?,
            spec.get("a-max")?,
            n_int()?,
            spec.get("a")?,
            &real(spec, "c3")?,
        )?,
        "corollary-chain" => {
            let chain = diss::corollary_chain(spec.get("a")?, spec.get("q")?, n_int()?, &real(spec, "c")?)?;
            let certified = chain.holds.is_some();
            let mut r = Report::new(&chain, certified);
            r.json["kind"] = json!(kind);
            r.json["params"] = json!(spec.params);
            return Ok(r);
        }
        "prime-pi" => {
            let body = json!({ "kind": kind, "params": spec.params, "value": diss::prime_pi(n_int()?) });
            return Ok(Report::new(&body, true));
        }
        other => return Err(CliError::Usage(format!("unknown bound `{other}`"))),
    };
    let mut body = magnitude_json(&m);
    body["kind"] = json!(kind);
    body["params"] = json!(spec.params);
    Ok(Report::new(&body, true))
}

fn digits(spec: &RunSpec) -> Result<Report, CliError> {
    let seq: DigitSequence = spec
        .str("c")?
        .parse()
        .map_err(|e: RealError| CliError::Usage(e.to_string()))?;
    if let Some(pos) = spec.opt::<Integer>("query")? {
        let answer = digit_query(&seq, &pos);
        let certified = !matches!(answer, DigitAnswer::Unknown { .. });
        let body = json!({ "sequence": seq.to_string(), "position": pos.to_string(), "answer": answer });
        return Ok(Report::new(&body, certified));
    }
    let r = digit_positions(&seq, spec.get("count")?, spec.precision)?;
    let certified = r.all_stages_hold;
    Ok(Report::new(&r, certified))
}

fn expsum(spec: &RunSpec) -> Result<Report, CliError> {
    let p = spec.precision;
    let mode = spec.str("mode")?;
    if mode == "parseval" && spec.params.contains_key("phi") {
        let r = parseval_check(&RepCountProfile::from_counts(spec.list("phi")?))?;
        let certified = r.certified;
        return Ok(Report::new(&r, certified));
    }
    let c = exponent(spec)?;
    let n: u64 = spec.get("N")?;
    match mode {
        "d" => {
            let t = RealBall::from_rational(&rational(spec, "t")?, p);
            let d = exp_sum_d(&c, n, &t, p)?;
            let body = json!({
                "N": n,
                "c_descriptor": c.to_string(),
                "t": spec.str("t")?,
                "D": d,
                "abs_upper": d.abs_upper().to_string_radix(10, Some(17)),
            });
            Ok(Report::new(&body, true))
        }
        "profile" => Ok(Report::new(&rep_count_profile(&c, n, p)?, true)),
        "parseval" => {
            let profile = rep_count_profile(&c, n, p)?;
            let r = parseval_check(&profile)?;
            let certified = r.certified;
            let mut report = Report::new(&r, certified);
            report.json["N"] = json!(n);
            report.json["c_descriptor"] = json!(c.to_string());
            Ok(report)
        }
        "fourth-moment" => {
            let r = fourth_moment_report(&c, n, p)?;
            let certified = r.identity_round_trip != Some(false);
            Ok(Report::new(&r, certified))
        }
        "large-values" => {
            let vs: Vec<Rational> = spec
                .str("V")?
                .split(',')
                .map(|s| parse_rational(s).ok_or_else(|| CliError::Usage(format!("V: not a number: `{s}`"))))
                .collect::<Result<_, _>>()?;
            let rows: Vec<LargeValues> = vs
                .iter()
                .map(|v| large_values_count(&c, n, v, p))
                .collect::<Result<_, _>>()?;
            let certified = rows.iter().all(|r| r.undecided == 0);
            let csv: Vec<String> = rows.iter().map(LargeValues::to_csv_row).collect();
            let body = json!({ "N": n, "c_descriptor": c.to_string(), "rows": rows });
            Ok(Report::new(&body, certified).with_csv(LargeValues::CSV_HEADER, csv))
        }
        "window" => {
            let y: WindowTarget = spec
                .str("y")?
                .parse()
                .map_err(|e: ExpsumError| CliError::Usage(e.to_string()))?;
            let delta = spec
                .opt::<String>("delta")?
                .map(|_| rational(spec, "delta"))
                .transpose()?;
            let r = window_pair_count(&c, n, &y, p, delta.as_ref())?;
            Ok(Report::new(&r, true))
        }
        other => Err(CliError::Usage(format!("unknown expsum mode `{other}`"))),
    }
}
