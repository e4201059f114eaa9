use thiserror::Error;

use crate::text::SourceSpan;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{span}: {message}")]
    Parse { span: SourceSpan, message: String },

    #[error("sort error in `{atom}`: {message}")]
    Sort { atom: String, message: String },

    #[error("formula has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("outside the supported fragment: {0}")]
    Fragment(String),

    #[error("resource limit exceeded: {what} (cost {cost}, limit {limit})")]
    Resource { what: String, cost: u128, limit: u128 },

    #[error("missing binding for `{0}`")]
    MissingBinding(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
