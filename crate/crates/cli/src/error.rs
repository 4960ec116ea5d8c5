use crate::syntax::{ParseError, Pos};

/// Everything that maps to exit code 2: the input could not be read,
/// parsed, resolved or typed.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("{pos}: {msg}")]
    Resolve { pos: Pos, msg: String },

    #[error("line {line}: {source}")]
    Core {
        line: usize,
        #[source]
        source: frobenius_core::Error,
    },

    #[error(transparent)]
    Model(#[from] frobenius_core::Error),

    #[error("{path}: {msg}")]
    File { path: String, msg: String },
}

impl InputError {
    pub fn file(path: impl AsRef<std::path::Path>, msg: impl ToString) -> Self {
        InputError::File {
            path: path.as_ref().display().to_string(),
            msg: msg.to_string(),
        }
    }

    pub fn at_line(line: usize) -> impl FnOnce(frobenius_core::Error) -> Self {
        move |source| InputError::Core { line, source }
    }
}

pub type Result<T, E = InputError> = std::result::Result<T, E>;
