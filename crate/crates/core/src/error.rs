use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse scalar {input:?}: {reason}")]
    ParseScalar { input: String, reason: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("malformed alternating form: {0}")]
    MalformedForm(String),

    #[error("malformed period matrix: {0}")]
    MalformedSubspace(String),

    #[error("degenerate complex structure: {0}")]
    DegenerateStructure(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid instance: {0}")]
    Instance(String),
}

impl Error {
    /// True for failures caused by ill-formed input rather than by a
    /// mathematical precondition of the requested analysis.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::ParseScalar { .. }
                | Error::Dimension(_)
                | Error::MalformedForm(_)
                | Error::MalformedSubspace(_)
                | Error::Instance(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
