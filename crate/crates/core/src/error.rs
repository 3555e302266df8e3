use thiserror::Error;

/// Errors raised while building meshes or solving fields.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The surface current violates the zero-net-current compatibility condition.
    #[error("incompatible data: |∫_Γ g ds| = {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    IncompatibleData { defect: f64, tolerance: f64 },

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("nonlinear iteration did not converge after {iterations} iterations (update {update:.3e})")]
    NonlinearDivergence { iterations: usize, update: f64 },

    #[error("incomplete model: {0}")]
    IncompleteModel(String),

    #[error("Picard iteration did not converge at step {step} (last residual {residual:.3e})")]
    NonConvergence { step: usize, residual: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
