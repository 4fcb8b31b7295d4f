use alloc::string::String;

/// Coarse error classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data or configuration.
    Input,
    /// The input is well formed but violates a metric precondition.
    Precondition,
    /// A score is mathematically undefined for the input (zero variance, constant ranking, ...).
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a scale needs at least two classes, got {0}")]
    ScaleTooSmall(usize),
    #[error("class label `{0}` appears twice in the scale")]
    DuplicateClass(String),
    #[error("label `{label}` is not a class of the scale")]
    UnknownLabel { label: String },
    #[error("class index {index} is out of range for a scale of {len} classes")]
    ClassOutOfRange { index: usize, len: usize },
    #[error("item `{item}` is missing from system `{system}`")]
    MissingItem { item: String, system: String },
    #[error("item `{item}` of system `{system}` does not occur in the gold standard")]
    UnexpectedItem { item: String, system: String },
    #[error("item id `{0}` occurs more than once")]
    DuplicateItem(String),
    #[error("dataset has no items")]
    EmptyDataset,
    #[error("system `{system}` has {got} predictions for {expected} items")]
    LengthMismatch {
        system: String,
        expected: usize,
        got: usize,
    },
    #[error("system `{0}` is already registered")]
    DuplicateSystem(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("invalid metric parameter: {0}")]
    InvalidParameter(String),
    #[error("gold distribution has no items")]
    EmptyDistribution,
    #[error("gold class {index} is empty; CEM at ordinal scale requires every class to be populated")]
    EmptyGoldClass { index: usize },
    #[error("closeness event has probability zero, information quantity undefined")]
    UndefinedCiq,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("score of system `{system}` on case `{case}` for `{metric}` is undefined")]
    UndefinedScore {
        system: String,
        case: String,
        metric: String,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyGoldClass { .. } | Error::UndefinedCiq | Error::EmptyDistribution => {
                ErrorKind::Precondition
            }
            Error::DegenerateInput(_) | Error::UndefinedScore { .. } => ErrorKind::Degenerate,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
