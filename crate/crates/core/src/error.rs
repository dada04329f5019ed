use thiserror::Error;

/// Errors produced by gsmkit.
#[derive(Debug, Error)]
pub enum GsmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Structured file-format error; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "structures `{first}` and `{second}` violate the separability condition \
         (margin {margin:.6e}, required {required})"
    )]
    Separability {
        first: String,
        second: String,
        margin: f64,
        required: &'static str,
    },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("Neumann series did not converge after {iterations} terms (last relative increment {last:.3e})")]
    Divergence {
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("quadrature not converged: doubling the node count changed an entry by {max_change:.3e}")]
    Quadrature { max_change: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GsmError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(GsmError::InvalidArgument(msg.into()))
}
