use std::path::PathBuf;

/// Errors raised by the engine.
///
/// Variants fall into three families that the command-line front end maps onto
/// distinct exit codes: malformed input (`Parse`), data that is well formed but
/// rejected (`Construction`, `Size`, `Domain`, `Validation`, `NotFree`, `Io`,
/// `Json`), and internal consistency violations that indicate a bug
/// (`Consistency`, `Contradiction`, `NoPrime`).
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid group table: {0}")]
    Construction(String),

    #[error("group order {order} exceeds the configured cap {cap}")]
    Size { order: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("diagonal action is not free: {label} lies in both stabilizer unions")]
    NotFree { witness: usize, label: String },

    #[error("{path}: {reason}")]
    Io { path: PathBuf, reason: String },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("no constituent satisfies the avoidance condition: {0}")]
    Contradiction(String),

    #[error("no prime p = 1 mod {exponent} with {lower} < p <= {bound}")]
    NoPrime {
        exponent: usize,
        lower: u64,
        bound: u64,
    },
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that can only arise from a defect in this crate.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Consistency(_) | Error::Contradiction(_) | Error::NoPrime { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
