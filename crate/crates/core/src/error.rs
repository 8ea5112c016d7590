use thiserror::Error;

use crate::model::Move;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero vector is not a move")]
    ZeroMove,
    #[error("a piece needs at least one move")]
    EmptyPiece,
    #[error("moves {0} and {1} are parallel")]
    ParallelMoves(Move, Move),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("closed form `{what}` produced non-integer value {value} at n = {n}")]
    NonIntegerResult { what: &'static str, n: i64, value: String },
    #[error("type count mismatch for {piece} at q = {q}: expected {expected}, got {actual}")]
    TypeCountMismatch {
        piece: String,
        q: u32,
        expected: String,
        actual: String,
    },
    #[error("no closed form for q = {q} (supported: {supported})")]
    UnsupportedQ { q: u32, supported: &'static str },

    #[error("{what} limit of {budget} exceeded")]
    ResourceLimit { what: &'static str, budget: u64 },

    #[error("board of {squares} squares exceeds the enumerator limit of {max}")]
    BoardTooLarge { squares: usize, max: usize },

    #[error("insufficient data for residue class {residue}: have {have} points, need {need}")]
    InsufficientData { residue: usize, have: usize, need: usize },
    #[error("inconsistent data at n = {n}: fit predicts {expected}, data has {actual}")]
    InconsistentData { n: i64, expected: String, actual: String },
    #[error("no period up to {bound} fits the data")]
    NoPeriodFound { bound: usize },
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),

    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
