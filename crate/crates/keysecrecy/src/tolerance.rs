//! Central record of every numerical tolerance used by the crate.
//!
//! Each constant is the single source of truth for its check; tests and the
//! acceptance suite reference these rather than repeating literals.

/// Max allowed deviation from conjugate symmetry when validating a Hermitian matrix.
pub const HERMITIAN: f64 = 1e-12;

/// Max allowed deviation from unit trace / positive semidefiniteness for states.
pub const STATE: f64 = 1e-10;

/// Max allowed deviation of a probability vector's sum from 1.
pub const PROBABILITY: f64 = 1e-12;

/// Jacobi eigensolver: sweep until every off-diagonal magnitude is below this.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;

/// Jacobi eigensolver: hard cap on the number of cyclic sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Spectral reconstruction accuracy guaranteed by the eigensolver.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Eigenvector orthonormality guaranteed by the eigensolver.
pub const EIG_ORTHONORMALITY: f64 = 1e-10;

/// Eigenvalues below this are treated as zero when forming pseudo-inverse square roots.
pub const PSEUDO_INVERSE_CUTOFF: f64 = 1e-12;

/// Side states are treated as classical when all pairwise commutators stay below this.
pub const COMMUTATOR: f64 = 1e-10;

/// Eigenvalue clustering width used when refining a common eigenbasis.
pub const EIGENVALUE_CLUSTER: f64 = 1e-8;

/// Default duality-gap target for the guessing solver.
pub const SOLVER_GAP: f64 = 1e-8;

/// Default iteration cap for the guessing solver.
pub const SOLVER_MAX_ITER: usize = 10_000;

/// Slack allowed on certificate feasibility checks (dual domination, POVM completeness).
pub const CERTIFICATE: f64 = 1e-9;

/// Agreement required between independent routes to the same distance (oracle cross-checks).
pub const CROSS_CHECK: f64 = 1e-10;

/// Agreement required between exact classical quantities computed two ways.
pub const EXACT_CLASSICAL: f64 = 1e-12;

/// Slack on the composition bound `inflation <= trace distance`.
pub const COMPOSITION: f64 = 1e-12;

/// Slack used by the implication harness when asserting the positive implications.
pub const HARNESS: f64 = 1e-10;
