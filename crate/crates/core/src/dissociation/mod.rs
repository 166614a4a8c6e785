//! Threshold bounds, dissociating exponents, nonvanishing of linear forms,
//! dissociativity and multiplicative independence.

pub mod bounds;
mod certificate;
mod digits;
mod dissociated;
mod form;
mod relation;

use thiserror::Error;

use crate::realcore::RealError;

pub use bounds::{
    alpha_lower_log, baker_wustholz_log, c0_log, corollary_chain, feldman_log_bound, prime_corollary_log, prime_pi,
    psi_log, rational_threshold_log, CorollaryChain, BOUND_PREC,
};
pub use certificate::{recheck, Certificate, CertificateKind, RecheckReport, Verdict, CERTIFICATE_SCHEMA};
pub use digits::{digit_positions, digit_query, DigitPositions};
pub use dissociated::{check_dissociated, DissociationVariant, MAX_SET_SIZE};
pub use form::{
    decomposition, nearby_rational, verify_nonvanishing, verify_nonvanishing_near, Decomposition, LinearForm,
    DIAGNOSTIC_PREC,
};
pub use relation::{
    multiplicative_independence, relation_certificate, relation_lattice, verify_relation, Multiplicative,
};

/// Default for the effective constants `c3`, `c6`, `c7`, `c8`.
pub const DEFAULT_EFFECTIVE_CONSTANT: u64 = 3;

#[derive(Debug, Error)]
pub enum DissociationError {
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate: {0}")]
    Certificate(String),
}
