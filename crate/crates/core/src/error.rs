use thiserror::Error;

use crate::phrase::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet: {0}")]
    Alphabet(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("letter {0} has no projection")]
    MissingProjection(Letter),

    #[error("not a Gauss phrase: letter {letter} occurs {count} time(s)")]
    NotGauss { letter: Letter, count: usize },

    #[error("phrases are over different alphabets")]
    AlphabetMismatch,

    #[error("phrases have different lengths ({left} vs {right} components)")]
    LengthMismatch { left: usize, right: usize },

    #[error("component index {index} out of range for a phrase of length {len}")]
    ComponentOutOfRange { index: usize, len: usize },

    #[error("stale move descriptor: {0}")]
    StaleMove(String),

    #[error("the T invariant is only defined for diagonal homotopy data")]
    NonDiagonal,

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("no catalog form reached within budget ({explored} states explored)")]
    Unclassified { explored: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid Gauss code: {0}")]
    GaussCode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
