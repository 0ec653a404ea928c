use thiserror::Error;

/// Errors produced by mesh construction, assembly, solvers and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mesh needs at least one cell")]
    EmptyMesh,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("regular family requires 0 < alpha < 1 < beta, got alpha = {alpha}, beta = {beta}")]
    InvalidBand { alpha: f64, beta: f64 },
    #[error("quadrature order {0} outside 1..=32")]
    QuadratureOrder(usize),
    #[error("singular matrix: zero pivot at row {row}")]
    SingularMatrix { row: usize },
    #[error("mass block is not invertible: {0}")]
    SingularMass(String),
    #[error("Schur complement is not positive definite at row {row}")]
    IndefiniteSchur { row: usize },
    #[error("Gram matrix is not positive definite ({0})")]
    NotPositiveDefinite(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("rate fit needs at least 3 rows, got {0}")]
    TooFewRows(usize),
    #[error("degenerate rate fit: all abscissae are equal")]
    DegenerateFit,
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
