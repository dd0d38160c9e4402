use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The diagram data does not describe a well-formed leveled graph.
    #[error("structural error at level {level}: {detail}")]
    Structural { level: usize, detail: String },

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("conversion error: {0}")]
    Conversion(String),

    #[error("parse error on line {line}: {detail}")]
    Parse { line: usize, detail: String },

    /// A word would exceed the configured expansion ceiling.
    #[error(
        "block of length {length} at level {level} exceeds the expansion limit {limit}; \
         telescope the diagram or raise the limit"
    )]
    Resource {
        level: usize,
        length: String,
        limit: u64,
    },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

impl Error {
    pub(crate) fn structural(level: usize, detail: impl Into<String>) -> Self {
        Error::Structural {
            level,
            detail: detail.into(),
        }
    }

    pub(crate) fn contract(detail: impl Into<String>) -> Self {
        Error::Contract(detail.into())
    }
}
