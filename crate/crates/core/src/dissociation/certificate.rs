//! Self-describing certificates with a content hash and a re-verifier.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::DissociationError;

pub const CERTIFICATE_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Nonvanishing,
    Dissociated,
    MultiplicativeRelation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Nonvanishing,
    ZeroCertified,
    Dissociated,
    NotDissociated,
    Independent,
    Relation,
    Unresolved,
}

impl Verdict {
    pub fn is_unresolved(self) -> bool {
        self == Verdict::Unresolved
    }
}

/// A verdict with the inputs that produced it and the evidence behind it.
///
/// Object keys serialize in sorted order, so the JSON form is canonical and
/// `hash` is the SHA-256 of that form with `hash` left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub kind: CertificateKind,
    pub inputs: Value,
    pub verdict: Verdict,
    pub evidence: Value,
    pub precision_bits: u32,
    pub hash: String,
}

impl Certificate {
    pub fn new(kind: CertificateKind, inputs: Value, verdict: Verdict, evidence: Value, precision_bits: u32) -> Self {
        let mut cert = Certificate {
            schema_version: CERTIFICATE_SCHEMA,
            kind,
            inputs,
            verdict,
            evidence,
            precision_bits,
            hash: String::new(),
        };
        cert.hash = cert.content_hash();
        cert
    }

    /// SHA-256 of the canonical form without the hash field.
    pub fn content_hash(&self) -> String {
        let mut bare = self.clone();
        bare.hash.clear();
        hex::encode(Sha256::digest(bare.to_canonical_json().as_bytes()))
    }

    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("certificate serializes");
        serde_json::to_string(&v).expect("value serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, DissociationError> {
        serde_json::from_str(s).map_err(|e| DissociationError::Certificate(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecheckReport {
    pub hash_valid: bool,
    pub verdict_reproduced: bool,
    pub evidence_reproduced: bool,
    pub recomputed_verdict: Verdict,
}

impl RecheckReport {
    pub fn ok(&self) -> bool {
        self.hash_valid && self.verdict_reproduced && self.evidence_reproduced
    }
}

/// Re-runs the verifier named by the certificate on its recorded inputs.
pub fn recheck(cert: &Certificate) -> Result<RecheckReport, DissociationError> {
    let fresh = match cert.kind {
        CertificateKind::Nonvanishing => super::form::recheck_inputs(&cert.inputs)?,
        CertificateKind::Dissociated => super::dissociated::recheck_inputs(&cert.inputs)?,
        CertificateKind::MultiplicativeRelation => super::relation::recheck_inputs(&cert.inputs)?,
    };
    Ok(RecheckReport {
        hash_valid: cert.content_hash() == cert.hash,
        verdict_reproduced: fresh.verdict == cert.verdict,
        evidence_reproduced: fresh.evidence == cert.evidence && fresh.precision_bits == cert.precision_bits,
        recomputed_verdict: fresh.verdict,
    })
}

pub(crate) fn field<'a>(inputs: &'a Value, key: &str) -> Result<&'a Value, DissociationError> {
    inputs
        .get(key)
        .ok_or_else(|| DissociationError::Certificate(format!("missing input `{key}`")))
}

pub(crate) fn parse_field<T: serde::de::DeserializeOwned>(inputs: &Value, key: &str) -> Result<T, DissociationError> {
    serde_json::from_value(field(inputs, key)?.clone())
        .map_err(|e| DissociationError::Certificate(format!("input `{key}`: {e}")))
}
