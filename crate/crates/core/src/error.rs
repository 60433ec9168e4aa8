use thiserror::Error;

/// Errors raised by design construction, evaluation, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("abscissa {0} lies outside [-1, 1]")]
    Domain(f64),

    #[error("invalid polynomial parameters: {0}")]
    InvalidPolynomial(String),

    #[error("unsupported Jacobi parameters ({alpha}, {beta}); only 0 and 1 are supported")]
    UnsupportedJacobi { alpha: i32, beta: i32 },

    #[error("root finding did not converge for {0}")]
    RootConvergence(String),

    #[error("duplicate quadrature node {0}")]
    DuplicateNode(f64),

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("equal-weight search failed for d = {d}: best residual {residual:.3e}")]
    SearchFailed { d: usize, residual: f64 },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("azimuthal phase {alpha} outside the admissible window for t = {t}")]
    PhaseOutOfRange { alpha: f64, t: usize },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficients are not estimable under this design (projection residual {0:.3e})")]
    NotEstimable(f64),

    #[error("design matrix is rank deficient: rank {rank}, deficiency {deficiency}")]
    RankDeficient { rank: usize, deficiency: usize },

    #[error("unknown criterion `{0}`")]
    UnknownCriterion(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
