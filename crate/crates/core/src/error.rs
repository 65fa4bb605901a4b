use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not diagonalizable: eigenvector condition {condition:.3e} exceeds bound")]
    NonDiagonalizable { condition: f64 },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite{}", at_time(.t))]
    NotPositiveDefinite { t: Option<f64> },

    #[error("metric is not positive definite (det = {margin:.6e})")]
    PositivityViolation { margin: f64 },

    #[error("unsupported Hamiltonian: {0}")]
    UnsupportedHamiltonian(String),

    #[error("metric lost positivity at t = {t}")]
    PositivityLost { t: f64 },

    #[error("step too large at t = {t}: local error estimate {estimate:.3e} exceeds {bound:.3e}")]
    StepTooLarge { t: f64, estimate: f64, bound: f64 },

    #[error("Dyson map is singular (|det| = {det:.3e})")]
    SingularDysonMap { det: f64 },

    #[error("chain of {sites} sites exceeds the dense construction bound of {max}")]
    DimensionTooLarge { sites: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_time(t: &Option<f64>) -> String {
    match t {
        Some(t) => format!(" at t = {t}"),
        None => String::new(),
    }
}
