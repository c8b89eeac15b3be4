use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the series engine, the coefficient-body machinery and
/// the figure evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("truncation order {0} is below the minimum of {1}")]
    OrderTooSmall(usize, usize),

    #[error("{op}: constant term must be {expected}, found {found}")]
    ConstantTerm {
        op: &'static str,
        expected: &'static str,
        found: Complex64,
    },

    #[error("series is not normalized (expected c0 = 0, c1 = 1)")]
    NotNormalized,

    #[error("parameter {name} = {value} lies outside the closed unit disk")]
    OutsideDisk { name: &'static str, value: Complex64 },

    #[error("invalid Psi coefficients: {0}")]
    InvalidPsiCoeffs(String),

    #[error("degenerate bound: B4 + 2|B3| = 0 while the first case guard fails")]
    DegenerateBound,

    #[error("degenerate evaluation at z = {0}")]
    DegenerateEvaluation(Complex64),

    #[error("quadrature did not converge at theta = {theta}")]
    QuadratureNonConvergence { theta: f64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("grid resolution {0} is below the minimum of {1}")]
    GridTooSmall(usize, usize),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
