//! Crate-wide error type.

use thiserror::Error;

use crate::distinguish::GuessingCertificate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error(
        "matrix is not Hermitian: entry ({i},{j}) = {a}, entry ({j},{i}) = {b} \
         are not conjugate within {tol}"
    )]
    NotHermitian {
        i: usize,
        j: usize,
        a: num_complex::Complex64,
        b: num_complex::Complex64,
        tol: f64,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator trace is {trace}, expected 1 within {tol}")]
    NotUnitTrace { trace: f64, tol: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("probabilities sum to {sum}, expected 1 within {tol}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("probability entry {index} is negative: {value}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("key length l = {l} outside supported range {min}..={max}")]
    KeyLengthOutOfRange { l: usize, min: usize, max: usize },

    #[error("parameter {name} = {value} outside valid range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("duplicate key {key} in state entries")]
    DuplicateKey { key: String },

    #[error("key {key} does not match declared length l = {l}")]
    KeyLengthMismatch { key: String, l: usize },

    #[error("conditional state for key {key} has dimension {got}, expected side_dim = {want}")]
    SideDimMismatch {
        key: String,
        got: usize,
        want: usize,
    },

    #[error("brute-force oracle limited to {max} outcomes, got {got}; use the fast path")]
    OracleLimit { got: usize, max: usize },

    #[error(
        "guessing solver did not close the duality gap within {iterations} iterations: \
         gap = {gap:.3e} > tol = {tol:.3e} (bracket still valid)"
    )]
    GapNotClosed {
        gap: f64,
        tol: f64,
        iterations: usize,
        certificate: Box<GuessingCertificate>,
    },

    #[error("state has {keys} distinct keys, guessing solver supports at most {max}")]
    TooManyKeys { keys: usize, max: usize },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("distinguisher incompatible with inputs: {0}")]
    IncompatibleDistinguisher(String),

    #[error("assembled joint operator would have dimension {dim}, limit is {max}")]
    JointTooLarge { dim: usize, max: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
