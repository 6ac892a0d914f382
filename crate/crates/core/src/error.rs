use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands live in different algebras (different deformation or matrix size).
    #[error("operands are not composable: {0}")]
    Composability(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A documented precondition failed; `value` carries the measured quantity.
    #[error("precondition failed: {what} (measured {value:e}, allowed {allowed:e})")]
    Precondition { what: String, value: f64, allowed: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
