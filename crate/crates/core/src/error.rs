use thiserror::Error;

use crate::trisecant::GenericityViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("generator {generator} out of range for {strands} strands")]
    OutOfRange { generator: i32, strands: usize },

    #[error("move not applicable: {0}")]
    NotApplicable(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("degenerate layout: {0}")]
    DegenerateLayout(String),

    #[error("genericity failure: {}", format_violations(.0))]
    Genericity(Vec<GenericityViolation>),

    #[error("tangency: sign expression vanishes")]
    Tangency,

    #[error("genericity exhausted after {attempts} attempts (last: {last})")]
    GenericityExhausted { attempts: usize, last: String },

    #[error("inconsistent events: {0}")]
    InconsistentEvents(String),

    #[error("quandle axiom violation: {0}")]
    Axiom(String),

    #[error("inputs cannot be compared: {0}")]
    Incomparable(String),

    #[error("io error: {0}")]
    Io(String),
}

fn format_violations(v: &[GenericityViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
