use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension d = {d}: {what}")]
    UnsupportedDimension { d: u32, what: &'static str },

    #[error("invalid Young diagram {diagram:?} for depth {depth}")]
    InvalidDiagram { diagram: Vec<u32>, depth: u32 },

    #[error("invalid irrep label (row1 = {row1}, row2 = {row2})")]
    InvalidLabel { row1: u32, row2: u32 },

    #[error("quadrature multiplicity {value} is not an integer (tolerance {tol:e})")]
    NonIntegerMultiplicity { value: f64, tol: f64 },

    #[error("subgroup irrep {0} does not occur in the branching table")]
    UnknownEta(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operator side {side} exceeds the limit {limit}")]
    SizeGuard { side: usize, limit: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("eigendecomposition failed (residual {residual:e})")]
    EigenConvergence { residual: f64 },

    #[error("Schur embedding failed (leakage {leakage:e})")]
    Embedding { leakage: f64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by size or range guards rather than bad input.
    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. } | Error::OutOfRange(_))
    }
}
