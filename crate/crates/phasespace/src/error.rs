use thiserror::Error;

/// Errors produced by state construction and the diagnostic pipelines.
#[derive(Debug, Error)]
pub enum PhaseSpaceError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("covariance matrix is singular or not positive-definite")]
    SingularCovariance,

    #[error("symplectic eigenvalues fail to pair: moduli {0:?}")]
    UnpairedSpectrum([f64; 4]),

    #[error("negative radicand {0:e} in closed-form symplectic eigenvalue")]
    NegativeRadicand(f64),

    #[error("kernel matrix dimension {dim} exceeds guard {guard}; raise the limit to override")]
    KernelTooLarge { dim: usize, guard: usize },

    #[error("grid too coarse: momentum step {dp:e} exceeds Nyquist bound {bound:e} for the requested off-diagonal range")]
    GridTooCoarse { dp: f64, bound: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(#[from] ndarray_linalg::error::LinalgError),

    #[error("tomography requires at least 2 angles, got {0}")]
    TooFewAngles(usize),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, PhaseSpaceError>;
