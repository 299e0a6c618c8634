use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("label {label} out of range for r = {r}")]
    LabelOutOfRange { label: u32, r: u32 },
    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: i32, strands: usize },
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
