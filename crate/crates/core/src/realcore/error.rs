use super::magnitude::MagnitudeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealError {
    #[error("digit sequence positions cannot bound the tail at {precision} bits")]
    TailUnbounded { precision: u32 },
    #[error("tower depth limit {limit} exceeded after {computed} positions")]
    DepthExceeded { limit: usize, computed: usize },
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("precision limit of {0} bits reached without a certified answer")]
    PrecisionExhausted(u32),
    #[error(transparent)]
    Magnitude(#[from] MagnitudeError),
}
