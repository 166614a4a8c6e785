//! Exponential sums `D(t)`, representation counts over `S + S`, Parseval and
//! the fourth moment over the index group, large values of `D`, and the
//! window pair count.
//!
//! The DFT runs over the indices `q` of the sorted sums `y_q`, where the
//! identities hold exactly; the real-exponent sum is reported beside it.

mod complex;
mod profile;
mod sums;
mod window;

use thiserror::Error;

use crate::energy::EnergyError;
use crate::realcore::RealError;

pub use complex::ComplexBall;
pub use profile::{
    fourth_moment_report, parseval_check, rep_count_profile, FourthMoment, ParsevalCheck, RepCountProfile, DFT_LIMIT,
    DFT_PREC,
};
pub use sums::{exp_sum_d, large_values_count, LargeValues, PHASE_PREC};
pub use window::{window_pair_count, WindowCount, WindowTarget, WINDOW_MAX_N};

#[derive(Debug, Error)]
pub enum ExpsumError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("too large: {0}")]
    TooLarge(String),
}
