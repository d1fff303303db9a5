use thiserror::Error;

/// Errors raised by the group, character and bound machinery.
///
/// `Consistency` is reserved for failed mathematical assertions: a lemma
/// that should hold did not. Callers treat it differently from bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("group too large: closure exceeded {cap} elements")]
    SizeCap { cap: usize },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error at position {pos} near `{token}`: {message}")]
    Parse {
        pos: usize,
        token: String,
        message: String,
    },

    #[error("data error: {0}")]
    Data(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// True for failures of a mathematical assertion rather than of input.
    pub fn is_math_failure(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
