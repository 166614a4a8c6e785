//! Digit positions of the dissociating exponents, with stage checks.

use rug::Integer;
use serde::Serialize;

use super::DissociationError;
use crate::realcore::digits::{verify_stages, StageCheck};
use crate::realcore::{DigitAnswer, DigitSequence, Position};

#[derive(Debug, Clone, Serialize)]
pub struct DigitPositions {
    pub sequence: String,
    pub radix: u32,
    pub positions: Vec<Position>,
    /// One check per stage `n < positions.len()`; empty for rules without a threshold.
    pub stages: Vec<StageCheck>,
    /// Why the sequence stopped before `count` positions.
    pub stopped: Option<String>,
    pub all_stages_hold: bool,
}

/// The first `count` positions `d_1 < d_2 < ...`, each stage checked at `prec` bits.
/// Positions past the tower depth limit are cut off and reported in `stopped`.
pub fn digit_positions(seq: &DigitSequence, count: usize, prec: u32) -> Result<DigitPositions, DissociationError> {
    let (positions, err) = seq.take_positions(count);
    let stages = verify_stages(seq, &positions, prec)?;
    let all_stages_hold = stages
        .iter()
        .all(|s| (s.symbolic || s.by_construction) && s.numeric != Some(false));
    Ok(DigitPositions {
        sequence: seq.to_string(),
        radix: seq.radix(),
        positions,
        stages,
        stopped: err.map(|e| e.to_string()),
        all_stages_hold,
    })
}

/// Digit of `c` at `position`: `One` exactly at the `d_n`.
pub fn digit_query(seq: &DigitSequence, position: &Integer) -> DigitAnswer {
    seq.digit(position)
}
