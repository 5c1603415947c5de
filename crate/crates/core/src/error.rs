use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("enumeration cap exceeded: {0}")]
    SizeCap(String),
    #[error("subgroup is not contained in the ambient group: {0}")]
    NotContained(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("work budget exhausted after {0} steps")]
    Budget(u64),
    #[error("evaluation point outside the domain of convergence: {0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
