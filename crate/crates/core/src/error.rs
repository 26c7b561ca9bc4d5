use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid model ({invariant}): {msg}")]
    Validation { invariant: String, msg: String },
    #[error("truncation exhausted: {0}")]
    Truncation(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn validation(invariant: &str, msg: impl Into<String>) -> Error {
        Error::Validation { invariant: invariant.to_string(), msg: msg.into() }
    }

    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Validation { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
