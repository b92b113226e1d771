use thiserror::Error;

/// Errors raised by the algebra and spectral sequence engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live over different variable tables")]
    TableMismatch,

    #[error("invalid variable table: {0}")]
    InvalidTable(String),

    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),

    #[error("zero polynomial has no leading part")]
    ZeroInput,

    #[error("input is not homogeneous")]
    Inhomogeneous,

    #[error("truncation bound violated: {0}")]
    TruncationBound(String),

    #[error("generator index overflow: {0}")]
    GeneratorOverflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exterior variables are not supported here")]
    ExteriorVariables,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("precision exceeded: {0}")]
    PrecisionExceeded(String),

    #[error("inexact series division")]
    InexactDivision,

    #[error("differential error: {0}")]
    Differential(String),

    #[error("abutment mismatch: {0}")]
    Abutment(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether this error is a configurable resource cap rather than a bug or bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}
