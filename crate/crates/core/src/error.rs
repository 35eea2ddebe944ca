use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NNError {
    /// A log-space value left the finite range of `f64`.
    #[error("value out of range: {0}")]
    Range(String),

    /// Division by the NN zero. `b = 1` is the additive identity of the
    /// field, so `a ⊘ 1` and `1^{{-1}}` are undefined.
    #[error("division by the NN zero (the value 1)")]
    DivisionByOne,

    /// An expression or function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// Adaptive quadrature could not certify the requested tolerance.
    #[error("quadrature did not reach tolerance {tol:e} (estimated error {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    /// The boundary-value problem has no unique solution.
    #[error("ill-posed boundary-value problem: {0}")]
    WellPosedness(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: String, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed external input (problem files and the like).
    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, NNError>;
