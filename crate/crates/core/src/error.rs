use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown identifier `{name}` at column {column}")]
    UnknownVariable { name: String, column: usize },

    /// `index` is the 1-based variable number as written (`x3` has index 3).
    #[error("variable x{index} is out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("singular point: `{subtree}` evaluates to {value}")]
    Singular { subtree: String, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("evaluation point has a non-finite coordinate")]
    NonFiniteCoordinate,

    #[error("finite-difference step must be positive and finite")]
    InvalidStep,

    #[error("unsupported size n={n}, q={q} (n must be in 1..=4, q in 1..=3)")]
    UnsupportedSize { n: usize, q: usize },

    #[error("tensor is not pure with respect to the endomorphism (residual {residual:e})")]
    NotPure { residual: f64 },

    #[error("connection is not symmetric (torsion residual {residual:e})")]
    Torsion { residual: f64 },

    #[error("cannot compare components expressed in different frames")]
    FrameMismatch,

    #[error("no non-singular sample point found after {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    #[error("invalid sample box: {0}")]
    InvalidBox(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
