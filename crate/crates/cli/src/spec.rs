use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{CliError, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One run: subcommand, canonical parameters and execution settings.
///
/// `threads` and `cache_dir` do not affect the report and stay out of the key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunSpec {
    pub subcommand: String,
    pub params: BTreeMap<String, String>,
    pub precision: u32,
    #[serde(skip)]
    pub threads: usize,
    pub output: OutputFormat,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Serialize)]
struct Keyed<'a> {
    schema_version: u32,
    #[serde(flatten)]
    spec: &'a RunSpec,
}

impl RunSpec {
    /// Compact JSON with sorted keys; independent of parameter insertion order.
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(Keyed {
            schema_version: SCHEMA_VERSION,
            spec: self,
        })
        .expect("spec serializes");
        serde_json::to_string(&v).expect("value serializes")
    }

    /// SHA-256 of the canonical JSON, in hex.
    pub fn cache_key(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub(crate) fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self
            .params
            .get(key)
            .ok_or_else(|| CliError::Usage(format!("missing parameter `{key}`")))?;
        raw.parse()
            .map_err(|_| CliError::Usage(format!("parameter `{key}`: cannot parse `{raw}`")))
    }

    pub(crate) fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.params.contains_key(key).then(|| self.get(key)).transpose()
    }

    pub(crate) fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError> {
        let raw: String = self.get(key)?;
        raw.split(',')
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Usage(format!("parameter `{key}`: cannot parse `{s}`")))
            })
            .collect()
    }

    pub(crate) fn str(&self, key: &str) -> Result<&str, CliError> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Usage(format!("missing parameter `{key}`")))
    }
}
