use thiserror::Error;

use crate::group::GroupCode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed group spec `{0}`")]
    MalformedSpec(String),
    #[error("malformed element literal `{literal}`: {reason}")]
    MalformedLiteral { literal: String, reason: String },
    #[error("operation requires a {required} presentation")]
    WrongMode { required: &'static str },
    #[error("finite set is empty")]
    EmptySet,
    #[error("Reiter function has empty support")]
    EmptySupport,
    #[error("non-positive value {value} at code {code}")]
    NonPositiveValue { code: GroupCode, value: String },
    #[error("no level set satisfies the extraction bound")]
    NoLevelSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("finite solver found no matching at step {step}: the expanding harem witness does not hold for this graph")]
    InternalInfeasible { step: u64 },
    #[error("key element {0} is not in K")]
    KeyNotInK(GroupCode),
    #[error("unsupported group family `{0}`")]
    UnsupportedFamily(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}
