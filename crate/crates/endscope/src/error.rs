use thiserror::Error;

/// Crate-wide error type. The CLI maps variants onto exit codes: input
/// errors (bad files, malformed node references) exit 2, precondition
/// violations of otherwise well-formed requests exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error("unknown node reference: {0}")]
    UnknownNode(String),

    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    #[error("illegal unfolding node {unode}: {msg}")]
    IllegalUnode { unode: String, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("family does not cover: ray prefix {escape} avoids every cone")]
    NotCovering { escape: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, column, msg: msg.into() }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// CLI exit code for this error: 2 for input errors, 3 for precondition
    /// violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UnknownNode(_)
            | Error::UnknownVertex(_)
            | Error::IllegalUnode { .. }
            | Error::Io { .. } => 2,
            Error::Precondition(_) | Error::NotCovering { .. } => 3,
        }
    }
}
