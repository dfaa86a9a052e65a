use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({row}, {col}) is not a finite number")]
    NonFinite { row: usize, col: usize },
    #[error("entry ({row}, {col}) = {value} is negative beyond tolerance")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, which differs from 1 by more than {tol:e}")]
    RowSumViolation { row: usize, sum: f64, tol: f64 },
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("linear system is numerically singular")]
    SingularSystem,
    #[error("chain is not reversible (detailed balance violated by {violation:e})")]
    NotReversible { violation: f64 },
    #[error("spectrum is degenerate: second eigenvalue {lambda} is too close to 1")]
    DegenerateSpectrum { lambda: f64 },
    #[error("states must be distinct")]
    StatesNotDistinct,
    #[error("states must differ")]
    StatesEqual,
    #[error("state {state} is out of range for a chain with {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ChainError>;
