use std::fmt;

use thiserror::Error;

/// Location-tagged failure from one of the text parsers. Columns are 1-based
/// character positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(column: usize, message: impl Into<String>) -> Self {
        Self {
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at column {}: {}",
            self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid label scale: {0}")]
    InvalidScale(String),

    #[error("labels come from different scales (n = {left} and n = {right})")]
    ScaleMismatch { left: u32, right: u32 },

    #[error("division by the null label L0")]
    DivideByZeroLabel,

    #[error("invalid degree scale: {0}")]
    InvalidDegreeScale(String),

    #[error("cannot combine confidences: {0}")]
    ConfidenceMismatch(String),

    #[error("invalid confidence: {0}")]
    InvalidConfidence(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("frame has {size} atoms, enumeration limit is {limit}")]
    FrameTooLarge { size: usize, limit: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("{0}")]
    Syntax(#[from] ParseError),

    #[error("unknown atom `{atom}` at column {column}")]
    UnknownAtom { atom: String, column: usize },

    #[error("operands are defined on different frames")]
    FrameMismatch,

    #[error("operands use different integrity-constraint models")]
    ModelMismatch,

    #[error("operands use different enrichment types")]
    EnrichmentMismatch,

    #[error("invalid belief assignment: {0}")]
    InvalidAssignment(String),

    #[error("degenerate proportional redistribution between {left} and {right}: zero denominator with non-zero product")]
    DegenerateProportion { left: String, right: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
