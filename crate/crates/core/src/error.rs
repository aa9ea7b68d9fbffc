use thiserror::Error;

use crate::solver::StabilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("inverse of zero scalar")]
    ZeroInverse,

    #[error("exponent {exponent} outside the window [{min}, {max}]")]
    ExponentOverflow { exponent: i64, min: i32, max: i32 },

    #[error("quotient by the zero neutrix")]
    DivisionByZeroGroup,

    #[error("neutrix quotient {0} is not representable")]
    UnsupportedQuotient(String),

    #[error("division by an external number that contains zero: {0}")]
    DivisionByNonZeroless(String),

    #[error("matrix of order {n} exceeds the configured maximum {max}")]
    SizeExceeded { n: usize, max: usize },

    #[error("bad minor indices: {0}")]
    BadIndices(String),

    #[error("matrix is singular")]
    Singular,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("zero pivot at step {step}")]
    ZeroPivot { step: usize },

    #[error("right-hand neutrices differ; the system is not uniform, and adding equations can then destroy feasibility (uniformize replaces every B_i by the smallest one)")]
    NotUniform,

    #[error("matrix is not reduced: {0}")]
    NotReduced(String),

    #[error("system is not stable: {}", .0.summary())]
    Unstable(Box<StabilityReport>),

    #[error("Gauss-Jordan and Cramer solutions differ: gj = {gj}, cramer = {cramer}")]
    MethodMismatch { gj: String, cramer: String },

    #[error("matrix is not near-identity: {0}")]
    NotNearIdentity(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("neutrix R cannot be instantiated as a bounded interval")]
    UnboundedNeutrix,

    #[error("representative {0} has a pole at the chosen value of eps")]
    PoleAtEps(String),

    #[error("invalid numeric profile: {0}")]
    BadProfile(String),

    #[error("numerically singular matrix at column {0}")]
    NumericSingular(usize),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unstable(_) => 2,
            Error::ZeroPivot { .. } | Error::Singular => 3,
            Error::MethodMismatch { .. } => 4,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
