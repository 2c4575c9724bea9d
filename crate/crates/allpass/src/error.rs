use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frequencies {0} and {1} are closer than the separation threshold")]
    DuplicateFrequency(f64, f64),

    #[error("matrix is not unitary: ||A*A - I||_F = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NonUnitary { deviation: f64, tolerance: f64 },

    #[error("gamma is not Hermitian: ||G - G*||_F = {0:.3e}")]
    NonHermitianGamma(f64),

    #[error("gamma is not positive definite: smallest eigenvalue {0:.3e}")]
    NonPositiveGamma(f64),

    #[error("frequency {0} is too close to pi; rotate the data set first")]
    FrequencyAtPi(f64),

    #[error("point {0} has no group-delay matrix; run the group-delay optimizer first")]
    MissingGamma(usize),

    #[error("matrix is not Hermitian: ||P - P*||_F = {0:.3e}")]
    NonHermitianInput(f64),

    #[error("leading diagonal block of the Pick matrix is singular")]
    SingularLeadingBlock,

    #[error("group-delay matrix is numerically singular")]
    SingularGamma,

    #[error("reduced lift lost neutrality: ||B*JB||_F = {0:.3e}")]
    LostNeutrality(f64),

    #[error("top block of a reduced lift is not invertible (cond = {0:.3e})")]
    NonInvertibleTopBlock(f64),

    #[error("Pick matrix is not positive definite: smallest eigenvalue {witness:.6e}")]
    PickNotPositiveDefinite { witness: f64 },

    #[error("construction remained degenerate after {retries} derotation retries")]
    DegenerateConstruction { retries: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("denominator is numerically singular at the requested frequency (cond = {0:.3e})")]
    SingularDenominator(f64),

    #[error("leading denominator coefficient is singular; use frequency-domain filtering instead")]
    SingularLeadingCoefficient,

    #[error("no strictly feasible starting point for the barrier method")]
    InfeasibleStart,

    #[error("configuration error: {0}")]
    BadConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed input: {0}")]
    Parse(String),
}
