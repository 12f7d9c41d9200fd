use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("bracket index {index} out of range for m = {m}")]
    BracketIndex { index: u8, m: u8 },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("enumeration overflow: more than {0} words")]
    Overflow(usize),
    #[error("search budget of {0} nodes exceeded")]
    Budget(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("grammar error: {0}")]
    Grammar(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::BracketIndex { .. } => "bracket-index",
            Error::Shape(_) => "shape",
            Error::Overflow(_) => "overflow",
            Error::Budget(_) => "budget-exceeded",
            Error::Precondition(_) => "precondition",
            Error::NotApplicable(_) => "not-applicable",
            Error::Grammar(_) => "grammar",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
