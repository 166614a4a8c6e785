//! Certified real arithmetic and the exponent representations built on it.

pub mod ball;
pub mod compare;
pub mod digits;
pub mod error;
pub mod exact;
pub mod exponent;
pub mod magnitude;
pub mod poly;

pub use ball::{RealBall, GUARD_BITS, RADIUS_PREC};
pub use compare::{
    combine_terms, compare_sums, compare_sums_with, form_enclosure, sign_of_form, sign_of_form_by, CompareConfig,
    CompareVerdict,
};
pub use digits::{DigitAnswer, DigitRule, DigitSequence, Position, ThresholdFamily, TOWER_DEPTH_LIMIT};
pub use error::RealError;
pub use exact::{exact_zero_test, EqualityWitness, ExactOutcome};
pub use exponent::{pow, pow_eval, AlgebraicLog, Exponent, ExponentEval, NumericExponent, RationalExponent};
pub use magnitude::{LogMagnitude, MagnitudeError, Scalar, Sign, PLAIN_LIMIT_BITS};
pub use poly::Poly;
