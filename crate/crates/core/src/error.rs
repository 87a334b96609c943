use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element {element} exceeds ambient n = {n}")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("n = {n} exceeds the exhaustive enumeration limit of {limit}")]
    EnumerationLimit { n: u32, limit: u32 },

    #[error("index {index} precedes the first valid index {valid_from}")]
    IndexBelowStart { index: i64, valid_from: i64 },

    #[error("no known linear recurrence for family {0}")]
    UnknownFamily(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed b-file at line {line}: {reason}")]
    BFile { line: usize, reason: String },
}
