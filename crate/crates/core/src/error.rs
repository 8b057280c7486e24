use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("out of cap: {0}")]
    OutOfCap(String),
    #[error("hypothesis not satisfied: {0}")]
    Refused(String),
    #[error("unresolved reference: {0}")]
    Dangling(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Prefixes the message with `what`, keeping the variant.
    pub fn context(self, what: &str) -> Error {
        use Error::*;
        match self {
            Malformed(m) => Malformed(format!("{what}: {m}")),
            DimensionMismatch(m) => DimensionMismatch(format!("{what}: {m}")),
            AlgebraMismatch(m) => AlgebraMismatch(format!("{what}: {m}")),
            Invalid(m) => Invalid(format!("{what}: {m}")),
            BudgetExceeded(m) => BudgetExceeded(format!("{what}: {m}")),
            OutOfCap(m) => OutOfCap(format!("{what}: {m}")),
            Refused(m) => Refused(format!("{what}: {m}")),
            Dangling(m) => Dangling(format!("{what}: {m}")),
            Parse(m) => Parse(format!("{what}: {m}")),
            UnknownSuite(m) => UnknownSuite(format!("{what}: {m}")),
            Io(m) => Io(format!("{what}: {m}")),
        }
    }
}
