use thiserror::Error;

/// Every failure the library can report. Each variant carries a stable
/// machine-readable code and a distinct process exit status.
#[derive(Debug, Error)]
pub enum SchroError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("degenerate state: {0}")]
    DegenerateState(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("Jacobi splitting inapplicable: zero diagonal entry at row {row}")]
    ZeroDiagonal { row: usize },
    #[error("convergence unsafe: {0}")]
    ConvergenceUnsafe(String),
    #[error("no spectral gap: {0}")]
    NoGap(String),
    #[error("steady state unreachable: initial overlap is zero")]
    UnreachableSteadyState,
    #[error("top eigenvector unreachable: initial overlap is zero")]
    UnreachableEigenvector,
    #[error("degenerate recovery: recovered norm {norm:e} vanishes")]
    DegenerateRecovery { norm: f64 },
    #[error("dense size {size} exceeds limit {limit}")]
    SizeOverflow { size: usize, limit: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl SchroError {
    pub fn code(&self) -> &'static str {
        match self {
            SchroError::DimensionMismatch(_) => "dimension-mismatch",
            SchroError::NotSquare { .. } => "not-square",
            SchroError::NotHermitian { .. } => "not-hermitian",
            SchroError::NonFinite(_) => "non-finite",
            SchroError::DegenerateState(_) => "degenerate-state",
            SchroError::InvalidGrid(_) => "invalid-grid",
            SchroError::InvalidArgument(_) => "invalid-argument",
            SchroError::Numerical(_) => "numerical",
            SchroError::ZeroDiagonal { .. } => "zero-diagonal",
            SchroError::ConvergenceUnsafe(_) => "convergence-unsafe",
            SchroError::NoGap(_) => "no-gap",
            SchroError::UnreachableSteadyState => "unreachable-steady-state",
            SchroError::UnreachableEigenvector => "unreachable-eigenvector",
            SchroError::DegenerateRecovery { .. } => "degenerate-recovery",
            SchroError::SizeOverflow { .. } => "size-overflow",
            SchroError::Singular => "singular-matrix",
            SchroError::Parse { .. } => "parse-error",
            SchroError::Io(_) => "io-error",
        }
    }

    /// Process exit status for the CLI. Zero is reserved for success and 2
    /// for usage errors reported by the argument parser.
    pub fn exit_code(&self) -> u8 {
        match self {
            SchroError::DimensionMismatch(_) => 10,
            SchroError::NotSquare { .. } => 11,
            SchroError::NotHermitian { .. } => 12,
            SchroError::NonFinite(_) => 13,
            SchroError::DegenerateState(_) => 14,
            SchroError::InvalidGrid(_) => 15,
            SchroError::InvalidArgument(_) => 16,
            SchroError::Numerical(_) => 17,
            SchroError::ZeroDiagonal { .. } => 20,
            SchroError::ConvergenceUnsafe(_) => 21,
            SchroError::NoGap(_) => 22,
            SchroError::UnreachableSteadyState => 23,
            SchroError::UnreachableEigenvector => 24,
            SchroError::DegenerateRecovery { .. } => 25,
            SchroError::SizeOverflow { .. } => 26,
            SchroError::Singular => 27,
            SchroError::Parse { .. } => 30,
            SchroError::Io(_) => 31,
        }
    }
}

pub type Result<T> = std::result::Result<T, SchroError>;
