use thiserror::Error;

/// Errors produced by kernel, measure, and verdict operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: operands live on different discrete spaces")]
    SpaceMismatch,

    #[error("point {0:?} is not in the space")]
    PointNotFound(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("gram matrix is not symmetric as stored (entries ({0},{1}) differ)")]
    NotSymmetric(usize, usize),

    #[error("gram matrix is not positive semidefinite (eigenvalue {0:.3e} below tolerance)")]
    NotPositiveSemidefinite(f64),

    #[error("positive semidefiniteness violated: quadratic form evaluated to {0:.3e}")]
    PsdViolation(f64),

    #[error("negative coefficient at index {index}: {value}")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("kernel has no L1 null direction with zero mean")]
    NoNullDirection,

    #[error("spectrum too flat: requested epsilon unachievable on this space (best {best:.3e} > {requested:.3e})")]
    SpectrumTooFlat { best: f64, requested: f64 },

    #[error("no constant eigenfunction: the expansion does not contain the constant direction")]
    NoConstantEigenfunction,

    #[error("quadrature did not converge within {0} nodes")]
    QuadratureNonConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undecidable: {0}")]
    Undecidable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
