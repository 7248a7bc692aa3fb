use thiserror::Error;

/// Errors raised by register construction, model building, evolution and
/// state reconstruction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),

    #[error("duplicate mode label `{0}`")]
    DuplicateMode(String),

    #[error("register must hold between 1 and {max} modes, got {got}")]
    RegisterSize { got: usize, max: usize },

    #[error("expected {expected} occupation bits, got {got}")]
    OccupationLength { expected: usize, got: usize },

    #[error("occupation numbers must be 0 or 1, got {0}")]
    OccupationValue(u8),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("register mismatch: {0}")]
    RegisterMismatch(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("partial trace needs a nonempty subset of the register modes")]
    EmptyKeep,

    #[error("expected a {expected}-mode register, got {got} modes")]
    WrongRegisterSize { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wrong model variant: expected {expected}, got {got}")]
    WrongVariant {
        expected: &'static str,
        got: &'static str,
    },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error(
        "integration failed at t = {t}: trace error {trace_error:e}, min eigenvalue {min_eigenvalue:e}; \
         retry with a smaller dt_internal"
    )]
    IntegrationFailure {
        t: f64,
        trace_error: f64,
        min_eigenvalue: f64,
    },

    #[error("state is not of the odd-parity two-dot form: {0}")]
    InvalidStateForm(String),

    #[error("occupation probabilities are inconsistent: recovered cos(dphi) = {0}")]
    InconsistentProbabilities(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
