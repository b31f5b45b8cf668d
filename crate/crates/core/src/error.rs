use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operation requires the product basis, got {0}")]
    Basis(&'static str),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    Hermiticity { defect: f64 },

    #[error("not a physical density matrix: {0}")]
    NotPhysical(String),

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("steady states exist only at resonance (delta_lbar = {0})")]
    UnsupportedDetuning(f64),

    #[error("steady-state nullspace is two-dimensional; the initial population of |0,0> is required (--p00)")]
    MissingInitialPopulation,

    #[error("steady-state solver failed: {0}")]
    SolverFailure(String),

    #[error("negative eigenvalue {eigenvalue:.3e} at t = {t}; reduce the time step")]
    StepSize { t: f64, eigenvalue: f64 },

    #[error("closed form does not apply: {0}")]
    WrongConfiguration(String),

    #[error("conditional state undefined: outcome probability {0:.3e}")]
    UndefinedConditionalState(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end: 2 for bad input,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::UnsupportedDetuning(_)
            | Error::MissingInitialPopulation
            | Error::WrongConfiguration(_)
            | Error::Config(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
