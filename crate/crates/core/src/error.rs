use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "{matrix} is not symmetric: |{matrix}[{row}][{col}] - {matrix}[{col}][{row}]| = {gap:e}"
    )]
    NotSymmetric {
        matrix: &'static str,
        row: usize,
        col: usize,
        gap: f64,
    },

    #[error("V must have a zero diagonal, found V[{index}][{index}] = {value}")]
    NonzeroDiagonal { index: usize, value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid lattice {rows}x{cols}")]
    InvalidLattice { rows: usize, cols: usize },

    #[error("swap network needs at least 2 modes, got {0}")]
    ChainTooShort(usize),

    #[error("unsupported Trotter order {0} (expected 1 or 2)")]
    UnsupportedOrder(u32),

    #[error("index {index} out of range for {len} rows")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("orbital rows are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid particle count {eta} for {n} modes")]
    InvalidParticleCount { eta: usize, n: usize },

    #[error("{what} supports at most {limit} qubits, got {n}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    #[error("matrix logarithm is ambiguous: eigenvalue within {distance:e} of -1")]
    BranchCut { distance: f64 },

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
