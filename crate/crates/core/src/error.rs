use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error{}: {msg}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid sign character {0:?}")]
    InvalidSign(char),

    #[error("chirotope is identically zero")]
    ZeroChirotope,

    #[error("block column {column} is not the expected basis {expected}")]
    BadBlockColumn { column: usize, expected: String },

    #[error("configuration is rank deficient")]
    RankDeficient,

    #[error("unknown element {0}")]
    UnknownElement(usize),

    #[error("ground set of size {0} exceeds the supported maximum of 64")]
    TooManyElements(usize),

    #[error("covector closure exceeded the budget of {limit} covectors")]
    BudgetExceeded { limit: usize },

    #[error("basis {0:?} has zero sign and cannot be mutated")]
    ZeroBasis(Vec<usize>),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("invalid coline fixation: {0}")]
    InvalidFixation(String),

    #[error("objective is not generic: {0}")]
    NonGeneric(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed in stage {stage}: {detail}")]
    Verification { stage: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn verification(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Verification {
            stage,
            detail: detail.into(),
        }
    }
}
