//! Deterministic dense Hermitian linear algebra.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! many threads. Dimensions are expected to stay at or below 64; the solver
//! is tuned for accuracy at that scale, not for large sparse problems.

mod distance;
mod eig;
mod matrix;

pub use distance::{statistical_distance, trace_distance, trace_norm, validate_state};
pub use eig::{common_eigenbasis, eig_hermitian, Eigendecomposition};
pub use matrix::{ComplexMatrix, HermitianMatrix, ProbabilityVector};
