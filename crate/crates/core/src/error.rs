use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate publication id `{0}`")]
    DuplicatePublication(String),

    #[error("dataset contains no publications")]
    EmptyDataset,

    #[error("field `{field}` has no publications with {citations} citations")]
    UndefinedSegment { field: String, citations: u64 },

    #[error("score undefined: field `{field}` has no publications with {citations} citations")]
    UndefinedScore { field: String, citations: u64 },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("group has no publications")]
    EmptyGroup,

    #[error("inconsistent dataset: {0}")]
    InconsistentDataset(String),

    #[error("approach `{approach}` is only defined for top-x% schemes, got `{scheme}`")]
    ApproachSchemeMismatch { approach: String, scheme: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("validation error at line {line}: {message}")]
    Validation { line: u64, message: String },

    #[error("invalid number `{0}`")]
    InvalidNumber(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
