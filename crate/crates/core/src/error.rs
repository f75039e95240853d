use thiserror::Error;

/// Errors raised while building or applying operators.
#[derive(Debug, Error)]
pub enum SchwarzError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular matrix: pivot {pivot:e} at column {column} is below tolerance")]
    Singular { column: usize, pivot: f64 },

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("matrix failed the SPD smoke test: {0}")]
    NotSpd(String),

    #[error("operator is not linear: relative defect {defect:e}")]
    Nonlinear { defect: f64 },

    #[error("power iteration did not converge after {steps} steps (last Ritz values {last:e}, {previous:e})")]
    NoConvergence { steps: usize, last: f64, previous: f64 },

    #[error("point ({x}, {y}) lies outside the mesh")]
    OutsideDomain { x: f64, y: f64 },

    #[error("meshes are not nested: {0}")]
    NotNested(String),

    #[error("subdomain {0} has no free unknowns")]
    EmptySubdomain(usize),

    #[error("invalid smoother schedule {0:?}: only 'f', 'b' or '0' are allowed")]
    InvalidSchedule(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SchwarzError>;
