use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has zero dimension")]
    EmptyMatrix,

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("matrix is not unitary: |U^dag U - I| = {defect:e} exceeds {tolerance:e}")]
    NotUnitary { defect: f64, tolerance: f64 },

    #[error("eigensolver failed: {reason} (residual {residual:e})")]
    EigenSolver { reason: &'static str, residual: f64 },

    #[error("function is not finite at eigenvalue {eigenvalue}")]
    NonFiniteSpectralValue { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("precondition `{condition}` violated: residual {residual:e} exceeds {tolerance:e}")]
    Precondition {
        condition: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("index {index} out of range {min}..={max}")]
    Range { index: i64, min: i64, max: i64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("position {x} exceeds the resolution limit {limit} of the momentum grid")]
    Resolution { x: f64, limit: f64 },

    #[error(
        "Fock truncation too small: tail {tail:e} with n_max = {n_max}, try n_max >= {suggested}"
    )]
    FockTruncation {
        n_max: usize,
        tail: f64,
        suggested: usize,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
