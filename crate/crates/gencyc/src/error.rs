use thiserror::Error;

use crate::expr::ParseError;

/// Input errors. Verification failures are reported, not raised.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("syntax error in `{source_text}`: {error}")]
    Parse { source_text: String, error: ParseError },
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("unknown identifier `{0}`")]
    UnknownName(String),
    #[error("type error: {0}")]
    Type(String),
    #[error(transparent)]
    Eval(#[from] gencyc_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
