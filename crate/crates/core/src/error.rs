use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("the zero polynomial has no roots to analyse")]
    ZeroPolynomial,

    #[error("constant polynomial (degree 0) has no roots to analyse")]
    ConstantPolynomial,

    #[error("form degree m must be at least 1")]
    ZeroFormDegree,

    #[error("form degree m = {0} must be even")]
    OddFormDegree(u32),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },

    #[error("root iteration did not converge within {iterations} iterations (degree {degree})")]
    NoConvergence { degree: usize, iterations: usize },

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("ill-conditioned root spectrum: {0}")]
    IllConditioned(String),

    #[error("polynomial is real-rooted, so every even-degree form is positive semidefinite and no negative witness exists")]
    RealRooted,

    #[error("polynomial has non-real roots, so no sum-of-even-powers certificate exists")]
    NotRealRooted,

    #[error("certificate verification failed: {0}")]
    VerificationFailed(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid corpus parameters: {0}")]
    InvalidCorpus(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
