use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// An exact integer left the configured bit budget.
    #[error("arithmetic budget exceeded: {what} needs {bits} bits, limit is {limit}")]
    Budget { what: String, bits: u64, limit: u64 },

    #[error("word contains the stable letter t where a base-group word is required")]
    StableLetter,

    #[error("not cyclically {n}-reduced: rotation {rotation} has a pinch of cost {cost}")]
    NotCyclicallyReduced {
        n: String,
        rotation: usize,
        cost: String,
    },

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("step {step}: {source}")]
    Script {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unsupported symbolic configuration: {0}")]
    Symbolic(String),

    #[error("malformed diagram: {0}")]
    Diagram(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn budget(what: impl Into<String>, bits: u64, limit: u64) -> Self {
        Error::Budget {
            what: what.into(),
            bits,
            limit,
        }
    }

    pub fn is_budget(&self) -> bool {
        match self {
            Error::Budget { .. } => true,
            Error::Script { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}
