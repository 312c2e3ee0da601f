use thiserror::Error;

use crate::signvec::MAX_N;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,
    #[error("illegal character {ch:?} at position {pos}")]
    IllegalChar { ch: char, pos: usize },
    #[error("the zero vector is not a projective sign vector")]
    AllZero,
    #[error("length {0} exceeds the supported maximum of {MAX_N}")]
    TooLong(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameters n={n}, m={m}: need 1 <= n <= {MAX_N} and 0 <= m < n")]
    Params { n: usize, m: usize },
    #[error("invalid window: {0}")]
    Window(String),
    #[error("{0} is not an even signed permutation")]
    NotEven(String),
    #[error("malformed chain: {0}")]
    Chain(String),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("face cap of {cap} exceeded ({partial} faces enumerated before stopping)")]
    CapExceeded { cap: usize, partial: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Validates `1 <= n <= MAX_N` and `m < n`.
pub(crate) fn check_params(n: usize, m: usize) -> Result<()> {
    if n == 0 || n > MAX_N || m >= n {
        return Err(Error::Params { n, m });
    }
    Ok(())
}
