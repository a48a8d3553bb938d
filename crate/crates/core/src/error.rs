use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// States and letters are carried 0-based in the variants and displayed 1-based,
/// matching the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state {} out of range 1..={n}", state + 1)]
    StateOutOfRange { state: usize, n: usize },

    #[error("letter {} out of range 1..={k}", letter + 1)]
    LetterOutOfRange { letter: usize, k: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("performance ratio is undefined for a reset threshold of 0")]
    UndefinedRatio,
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
