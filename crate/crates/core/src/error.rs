use thiserror::Error;

use crate::term::TermError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("engine lacks `{capability}`, required by {needed_by}")]
    Capability {
        capability: &'static str,
        needed_by: String,
    },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("no {op} defined for `{left}` and `{right}`")]
    Undefined {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("duplicate norm id `{0}`")]
    DuplicateNormId(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn missing(capability: &'static str, needed_by: impl Into<String>) -> Error {
    Error::Capability {
        capability,
        needed_by: needed_by.into(),
    }
}
