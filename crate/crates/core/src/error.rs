use thiserror::Error;

/// Whether an error is a malformed input or a violated operation precondition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Precondition,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate cuspidal id `{0}`")]
    DuplicateId(String),
    #[error("broken dual pairing for `{id}`: {reason}")]
    BrokenDualPairing { id: String, reason: String },
    #[error("trivial label `{0}` must have dim 1, orthogonal type, omega +1 and be self-dual")]
    InvalidTrivial(String),
    #[error("label `{id}`: {reason}")]
    InvalidLabel { id: String, reason: String },
    #[error("unknown cuspidal id `{0}`")]
    UnknownRho(String),
    #[error("total dimension {0} is odd")]
    OddDimension(u64),
    #[error("block {0} has a non-self-dual label but its dual block is missing or has a different multiplicity")]
    UnpairedBlock(String),
    #[error("block {0} is of orthogonal type and must have even multiplicity")]
    OddOrthogonalMultiplicity(String),
    #[error("invalid block {0}: {1}")]
    InvalidBlock(String, String),
    #[error("invalid extended segment at {path}: {reason}")]
    InvalidSegment { path: String, reason: String },
    #[error("inadmissible order for `{rho}`: {reason}")]
    InadmissibleOrder { rho: String, reason: String },
    #[error("label `{0}` is not self-dual but carries segments")]
    NotSelfDual(String),
    #[error("sign characters live on different domains")]
    DomainMismatch,
    #[error("character value missing for class {0}")]
    MissingCharacterValue(String),
    #[error("character has a value on {0}, which is not a good-parity class")]
    ExtraCharacterValue(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("missing root number for ({rho}, {n})")]
    MissingRootNumber { rho: String, n: i64 },
    #[error("order enumeration exceeded the cap of {0} states")]
    Truncated(usize),
    #[error("{path}: {reason}")]
    Schema { path: String, reason: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Precondition(_)
            | Error::MissingRootNumber { .. }
            | Error::Truncated(_)
            | Error::DomainMismatch => ErrorKind::Precondition,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Error {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
