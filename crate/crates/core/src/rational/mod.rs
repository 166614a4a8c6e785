//! Rational exponents `c = a/q`: exact counts through the reduction to
//! integer exponents, negative integer exponents, and the summation and
//! divisor lemmas behind the asymptotic formulas.

mod counting;
mod negative;
mod report;
mod sums;

use thiserror::Error;

pub use counting::{
    brute_force_rational_counts, displayed_cube_sum, integer_energy_nontrivial, reduce_rational_count,
    reduce_rational_count_unrestricted,
};
pub use negative::{
    classify_negative, generators, is_multiple_of, negative_census, stated_count, NegativeCensus,
    NegativeClassification,
};
pub use report::{rational_asymptotic_report, AsymptoticReport, AsymptoticRow};
pub use sums::{divisor_counts, divisor_second_moment, partial_sum, zeta, PartialSum};

#[derive(Debug, Error)]
pub enum RationalError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("solution {witness:?} in [{big_n}]^4 for n = {n} is not a multiple of any listed generator")]
    ClassificationViolation {
        n: u64,
        big_n: u64,
        witness: [u64; 4],
        census: Box<NegativeCensus>,
    },
}
