use thiserror::Error;

/// Input text that could not be parsed, with a 1-based location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn at(mut self, line: usize, column: usize) -> Self {
        self.line = line;
        self.column = column;
        self
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported dimension {0} (expected {1})")]
    UnsupportedDimension(usize, String),

    #[error("expected a form of degree {expected}, got degree {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("Clifford representation self-check failed: {0}")]
    CliffordSelfCheck(String),

    #[error("operator of `{0}` is not symmetric")]
    NotSymmetric(String),

    #[error("not a G2 3-form: {0}")]
    NotG2Form(String),

    #[error("structure constants violate {0}")]
    InvalidAlgebra(String),

    #[error("singular coframe at {0:?}")]
    SingularCoframe(Vec<f64>),

    #[error("Ricci tensor not symmetric (asymmetry {0:.3e}); step too large or point too close to the domain edge")]
    RicciAsymmetry(f64),

    #[error("Newton iteration did not converge; residual trace {0:?}")]
    NewtonDiverged(Vec<f64>),

    #[error("hypothesis ({condition}) failed: {detail}")]
    Hypothesis { condition: u8, detail: String },

    #[error("closed-form determinant {closed} disagrees with the brute-force value {brute}")]
    DeterminantMismatch { closed: String, brute: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
