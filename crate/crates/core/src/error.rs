use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("matrix data has {got} entries, expected {expected}")]
    InvalidData { expected: usize, got: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (lambda_min = {lambda_min:.3e})")]
    NotPsd { lambda_min: f64 },
    #[error("negative power requires a positive definite matrix (lambda_min = {lambda_min:.3e})")]
    SingularForNegativePower { lambda_min: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not accretive (lambda_min of real part = {lambda_min:.3e})")]
    NotAccretive { lambda_min: f64 },
    #[error("real part is too ill-conditioned (condition number {cond:.3e})")]
    IllConditioned { cond: f64 },
    #[error("metric has rank {rank}, at least 2 is required")]
    RankTooSmall { rank: usize },
    #[error("operator admits no A-adjoint (residual {residual:.3e})")]
    NoAAdjoint { residual: f64 },
    #[error("operator is not A-bounded (residual {residual:.3e})")]
    NotABounded { residual: f64 },
    #[error("space of dimension {dim} is too small for |q| < 1")]
    DimensionTooSmall { dim: usize },
    #[error("invalid q parameter: |q| = {modulus} exceeds 1")]
    InvalidQ { modulus: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("quadrature did not converge (relative change {change:.3e} on node doubling)")]
    QuadratureNotConverged { change: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by numerical non-convergence rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureNotConverged { .. })
    }
}
