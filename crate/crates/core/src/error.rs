use thiserror::Error;

use crate::words::Word;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word length {0} outside the supported range 1..={max}", max = crate::words::MAX_LEN)]
    InvalidLength(usize),
    #[error("invalid symbol {0:?}; words are written over {{0,1}}")]
    InvalidSymbol(char),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("n = {0} must be even and at least 2")]
    OddLength(usize),
    #[error("cannot delete from a word of length {0}")]
    EmptyCenter(usize),
    #[error("words must be distinct")]
    IdenticalWords,
    #[error("word {0} is not balanced")]
    Unbalanced(Word),
    #[error("period bound {period} must be smaller than the word length {len}")]
    PeriodTooLarge { period: usize, len: usize },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("enumeration of {required} words exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("conflict graph with {vertices} vertices exceeds the exact-search budget of {budget}; use greedy_code instead")]
    SearchBudgetExceeded { vertices: usize, budget: usize },
    #[error("code is empty")]
    EmptyCode,
    #[error("duplicate codeword {0}")]
    DuplicateWord(Word),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown channel {0:?}")]
    UnknownChannel(String),
    #[error("unknown code family {0:?}")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
