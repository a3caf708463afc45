use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit length {n} outside the brute-force range {min}..={max}")]
    BitLengthOutOfRange { n: u32, min: u32, max: u32 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("invalid character {ch:?} at position {position} in {context}")]
    Format {
        ch: char,
        position: usize,
        context: &'static str,
    },

    #[error("endmarker {0} is added by the runner and may not appear in a word")]
    EndmarkerInWord(&'static str),

    #[error("state {state} carries weight but has no column for symbol {symbol}")]
    IncompleteSpec { state: String, symbol: &'static str },

    #[error("probe index {index} out of range for a run of {steps} steps")]
    ProbeOutOfRange { index: usize, steps: usize },

    #[error("prime set is empty")]
    EmptyPrimeSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance not applicable: {0}")]
    Inapplicable(String),

    #[error("malformed spec dump: {0}")]
    Dump(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
