//! Batch front end for `powerset-core`: every subcommand becomes a
//! [`RunSpec`] with canonical parameters, runs on a pool of the requested
//! size, and renders a deterministic JSON or CSV report. Reports are cached
//! on disk under the SHA-256 of the canonical spec.

pub mod args;
mod exec;
pub mod spec;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

pub use args::Cli;
pub use spec::{OutputFormat, RunSpec};

/// Version of the report layout; bumped on breaking changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Overrides `--cache-dir` when set.
pub const CACHE_ENV: &str = "POWERSET_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Unresolved(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub cache_hit: bool,
}

/// Runs `spec`, replaying the cached bytes when the key is present.
pub fn run(spec: &RunSpec) -> Result<Outcome, CliError> {
    let key = spec.cache_key();
    if let Some(dir) = &spec.cache_dir {
        if let Ok(bytes) = fs::read(dir.join(&key)) {
            return Ok(Outcome { bytes, cache_hit: true });
        }
    }
    let bytes = compute(spec)?;
    if let Some(dir) = &spec.cache_dir {
        store(dir, &key, &bytes).map_err(|e| CliError::Failed(format!("cache write to {}: {e}", dir.display())))?;
    }
    Ok(Outcome {
        bytes,
        cache_hit: false,
    })
}

/// Runs `spec` without consulting the cache.
pub fn compute(spec: &RunSpec) -> Result<Vec<u8>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads.max(1))
        .build()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let report = pool.install(|| exec::execute(spec))?;
    render(&report, spec.output)
}

fn store(dir: &Path, key: &str, bytes: &[u8]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(dir.join(key)).map_err(|e| e.error)?;
    Ok(())
}

fn render(report: &exec::Report, format: OutputFormat) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("value serializes");
            s.push('\n');
            Ok(s.into_bytes())
        }
        OutputFormat::Csv => match &report.csv {
            Some(table) => Ok(table.clone().into_bytes()),
            None => flat_csv(&report.json),
        },
    }
}

/// One header row and one data row from the top-level fields; nested
/// values are written as compact JSON.
fn flat_csv(v: &Value) -> Result<Vec<u8>, CliError> {
    let obj = v.as_object().expect("reports are objects");
    let cell = |x: &Value| match x {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(e.to_string());
    w.write_record(obj.keys()).map_err(fail)?;
    w.write_record(obj.values().map(cell)).map_err(fail)?;
    w.into_inner().map_err(|e| CliError::Failed(e.to_string()))
}
