use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input shape: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unknown tensor id {0}")]
    MissingTensor(usize),

    #[error("invalid contraction plan: {0}")]
    InvalidPlan(String),

    #[error("network is not closed")]
    NotClosed,

    #[error("resource cap exceeded: {what} ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("missing value for variable v{0}")]
    MissingVariable(u32),

    #[error("invalid monotone circuit: {0}")]
    InvalidMonotone(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("DIMACS parse error on line {line}: {msg}")]
    Dimacs { line: usize, msg: String },

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
