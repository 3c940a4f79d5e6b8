use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcaError {
    #[error("empty context")]
    EmptyContext,
    #[error("diameter out of range: {0}")]
    DiameterOutOfRange(usize),
    #[error("rule number out of range")]
    RuleNumberOutOfRange,
    #[error("procedural rules are not numbered")]
    ProceduralNotNumbered,
    #[error("context length {found} does not match rule diameter {expected}")]
    ContextLength { expected: usize, found: usize },
    #[error("array shorter than diameter")]
    ArrayTooShort,
    #[error("coding invariant violated: {0}")]
    CodingInvariant(String),
    #[error("illegal reaction {reaction} for pattern {pattern}")]
    IllegalReaction { reaction: String, pattern: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = NcaError> = std::result::Result<T, E>;
