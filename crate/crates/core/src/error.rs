use thiserror::Error;

/// Faults raised by the toolkit. Non-existence of a generalized inverse is
/// *not* a fault; see [`crate::geninv::Existence`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GinvError {
    #[error("backend mismatch: cannot combine {left} and {right} scalars")]
    BackendMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{op}: shape mismatch, expected {expected}, found {found}")]
    ShapeMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("{op}: matrix must be square, found {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("subspaces live in different ambient spaces ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("{0}")]
    DimensionMismatch(String),

    #[error("subspaces are not complementary")]
    NotComplementary,

    #[error("matrix is singular")]
    Singular,

    #[error("input is not idempotent: {which}")]
    NonIdempotent { which: &'static str },

    #[error("spectra overlap; Sylvester equation is ill-posed")]
    SpectraOverlap,

    #[error("spectral set is not separated: gap {gap:e} below {threshold:e}")]
    NotSeparated { gap: f64, threshold: f64 },

    #[error("eigenvalue {eigenvalue} lies within {threshold:e} of the contour")]
    EigenvalueOnContour { eigenvalue: String, threshold: f64 },

    #[error("lambda = {0} lies in the spectrum")]
    InSpectrum(String),

    #[error("Schur iteration did not converge")]
    NoConvergence,

    #[error("direction is the zero operator; inverse along 0 is excluded")]
    DegenerateDirection,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("missing context: {0}")]
    MissingContext(&'static str),

    #[error("operation requires the {0} backend")]
    WrongBackend(&'static str),

    #[error("invalid tolerance policy: {0}")]
    InvalidPolicy(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GinvError {
    fn from(e: std::io::Error) -> Self {
        GinvError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GinvError>;
