use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max entry deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid Schmidt spectrum: {0}")]
    BadSpectrum(String),
    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },
    #[error("{name} = {value} outside admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("(a, c) = ({a}, {c}) outside the rank-two X-state region")]
    OutsideRegion { a: f64, c: f64 },
    #[error("not a density matrix: {0}")]
    NotAState(String),
    #[error("rank {rank} invalid for Hilbert space dimension {dim}")]
    BadRank { rank: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
