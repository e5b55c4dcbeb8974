use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol {byte:#04x} at offset {offset}")]
    InvalidSymbol { offset: usize, byte: u8 },

    #[error("pattern must be non-empty")]
    EmptyPattern,

    #[error("block parameter {ell} out of range for a word of length {len} (allowed {min}..={max})")]
    BlockLength {
        ell: usize,
        len: usize,
        min: usize,
        max: usize,
    },

    #[error("suffix has length {got}, expected {expected}")]
    SuffixLength { got: usize, expected: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("chain file line {line}: {msg}")]
    ChainSyntax { line: usize, msg: String },

    #[error("transition graph is not irreducible")]
    Reducible,

    #[error("linear system is singular")]
    Singular,

    #[error("snake chain would exceed {cap} states")]
    StateExplosion { cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
