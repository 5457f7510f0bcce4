use crate::syntax::{ArityClash, Diagnostic};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}", render_diagnostics(.0))]
    Parse(Vec<Diagnostic>),

    #[error(transparent)]
    Arity(#[from] ArityClash),

    #[error("function symbol `{0}` cannot be interpreted by the model enumerator")]
    FunctionSymbol(String),

    #[error("`{0}` is not in the model's signature")]
    UnknownSymbol(String),

    #[error("variable order {given:?} does not match the free variables {expected:?}")]
    VariableOrder {
        given: Vec<String>,
        expected: Vec<String>,
    },

    #[error("census at domain size {size} needs {required} units of work, over the limit of {limit}")]
    GuardExceeded {
        size: usize,
        required: String,
        limit: u128,
    },

    #[error("the monadic counter needs unary (or nullary) predicates only: {0}")]
    NotMonadic(String),

    #[error("too many sentences to track at once ({0}; at most 128)")]
    TooManySentences(usize),

    #[error("invalid interval [{0}, {1}]: need 0 <= lower <= upper <= 1")]
    InvalidInterval(String, String),

    #[error("invalid acceptance level {0}: need 0 < delta < 1")]
    InvalidDelta(String),

    #[error("invalid size range {0}..{1}: need 1 <= min <= max")]
    InvalidSizeRange(usize, usize),

    #[error("a lottery needs at least 2 tickets, got {0}")]
    TooFewTickets(usize),

    #[error("domain size must be at least 1")]
    EmptyDomain,
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Self {
        Error::Parse(vec![d])
    }
}

impl From<Vec<Diagnostic>> for Error {
    fn from(d: Vec<Diagnostic>) -> Self {
        Error::Parse(d)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
