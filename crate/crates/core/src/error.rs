use thiserror::Error;

/// Errors raised by the qudit, frame, representation and threshold routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {0}: expected one of 3, 5, 7")]
    UnsupportedDimension(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operator is not a valid {role}: {detail}")]
    RoleViolation { role: &'static str, detail: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate frame: overlap <b_{j}|a_{i}> has modulus {modulus:e}, below the floor {floor:e}")]
    DegenerateFrame {
        i: usize,
        j: usize,
        modulus: f64,
        floor: f64,
    },

    #[error("basis `{name}` is not orthonormal (Gram residual {residual:e})")]
    NonOrthonormalBasis { name: String, residual: f64 },

    #[error("Kraus operators are not trace preserving (residual {0:e})")]
    NotTracePreserving(f64),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("no threshold: the predicate is false at p = 1")]
    NoThreshold,

    #[error("frame search produced no frame passing validation")]
    NoValidFrame,
}

pub type Result<T> = std::result::Result<T, Error>;
