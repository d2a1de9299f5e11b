use thiserror::Error;

/// Errors raised across the simulator, protocol engine, and CLI surface.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's contract (bad index, dimension
    /// mismatch, qubit collision).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    /// The request exceeds a hard resource bound (e.g. exhaustive key
    /// enumeration past the qubit limit).
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: resource-bound errors exit 2,
    /// everything else exits 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceBound(_) => 2,
            _ => 1,
        }
    }
}
