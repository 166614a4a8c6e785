//! Additive energy `E(c, N)`, the nontrivial count `B(c, N)` and `|S + S|`
//! for `S = {1^c, ..., N^c}`, plus constructions of exponents with
//! nontrivial solutions.
//!
//! Pair sums are enclosed in `f64` intervals, sorted by lower endpoint and
//! split into clusters of overlapping intervals. Only entries inside a
//! cluster can be equal; each cluster is resolved by certified comparison.
//! Comparisons that stay open at the maximum precision are counted as
//! `unresolved` and widen the reported bounds rather than guessing.

mod construct;
mod engine;
mod oracle;
pub(crate) mod pairs;

use thiserror::Error;

use crate::realcore::RealError;

pub use construct::{construct_sporadic, construct_three_ap, solution_exponent_bound, SolutionKind, SporadicSolution};
pub use engine::{
    additive_energy, quadruple_terms, run_energy, sumset_size, EnergyConfig, EnergyReport, EnergyRun, PowerTable,
    SumClass, SumsetSize, CONVENTION, SCHEMA_VERSION,
};
pub use oracle::{brute_force_energy, OracleCount};

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("spill file i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("construction degenerates at n = {n}: the reduced polynomial is constant")]
    DegenerateConstruction { n: u64 },
    #[error("no admissible root for n = {n} after removing x - 1 from {polynomial}")]
    NoAdmissibleRoot { n: u64, polynomial: String },
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
