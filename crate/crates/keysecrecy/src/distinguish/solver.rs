//! Certified solver for optimal key guessing with quantum side information.
//!
//! The primal iterate starts from the pretty-good measurement and follows the
//! standard fixed-point update for minimum-error discrimination: with
//! `W_j = p_j rho_j` and `R = sum_j W_j M_j W_j`, replace each effect by
//! `R^{-1/2} W_j M_j W_j R^{-1/2}`. Every candidate measurement also yields a
//! feasible dual point `Y = herm(sum_j W_j M_j) + lambda I` with `lambda` the
//! smallest shift making `Y >= W_j` for all `j`, so the true optimum is always
//! bracketed by `[primal, dual]` regardless of how far the iteration got.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, ComplexMatrix, HermitianMatrix};
use crate::states::CqState;
use crate::tolerance;

/// Maximum side-information dimension accepted by the solver.
pub const MAX_SOLVER_SIDE_DIM: usize = 16;

/// Maximum number of distinct keys accepted by the solver.
pub const MAX_SOLVER_KEYS: usize = 64;

/// A certified bracket on the optimal guessing probability.
///
/// `measurement[j]` is the effect for the `j`-th state entry (PSD, summing to
/// the identity within [`tolerance::CERTIFICATE`]); `dual_operator` dominates
/// every `p_j rho_j`, so `primal_value <= optimum <= dual_value`.
#[derive(Debug, Clone)]
pub struct GuessingCertificate {
    pub measurement: Vec<HermitianMatrix>,
    pub dual_operator: HermitianMatrix,
    pub primal_value: f64,
    pub dual_value: f64,
}

impl GuessingCertificate {
    pub fn gap(&self) -> f64 {
        self.dual_value - self.primal_value
    }

    /// Midpoint of the bracket; the reported guessing probability.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.primal_value + self.dual_value)
    }
}

impl Serialize for GuessingCertificate {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GuessingCertificate", 5)?;
        s.serialize_field("primal", &self.primal_value)?;
        s.serialize_field("dual", &self.dual_value)?;
        s.serialize_field("gap", &self.gap())?;
        s.serialize_field("measurement", &self.measurement)?;
        s.serialize_field("dual_operator", &self.dual_operator)?;
        s.end()
    }
}

/// Optimal guessing probability for the key of `state`, bracketed to `tol`.
///
/// Errors with [`Error::GapNotClosed`] when `max_iter` updates leave the
/// bracket wider than `tol`; the error carries the best certificate found,
/// which remains valid.
pub fn solve_guessing(state: &CqState, tol: f64, max_iter: usize) -> Result<GuessingCertificate> {
    if state.side_dim() > MAX_SOLVER_SIDE_DIM {
        return Err(Error::UnsupportedConfiguration(format!(
            "solver supports side_dim <= {MAX_SOLVER_SIDE_DIM}, got {}",
            state.side_dim()
        )));
    }
    if state.entries().len() > MAX_SOLVER_KEYS {
        return Err(Error::TooManyKeys {
            keys: state.entries().len(),
            max: MAX_SOLVER_KEYS,
        });
    }
    if tol <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)".into(),
        });
    }

    let dim = state.side_dim();
    let k = state.entries().len();
    let weighted: Vec<HermitianMatrix> = state
        .entries()
        .iter()
        .map(|e| state.side_of(e).scale(e.weight))
        .collect();

    let mut measurement = pretty_good_measurement(&weighted, dim);
    let mut best = evaluate(&weighted, &measurement, dim);

    for iter in 0..max_iter {
        if best.gap() <= tol {
            return Ok(best);
        }
        // Fixed-point update.
        let transported: Vec<HermitianMatrix> = weighted
            .iter()
            .zip(&measurement)
            .map(|(w, m)| {
                w.matrix()
                    .matmul(m.matrix())
                    .matmul(w.matrix())
                    .hermitian_part()
            })
            .collect();
        let mut r = HermitianMatrix::zeros(dim);
        for t in &transported {
            r = r.add(t);
        }
        let (r_inv_sqrt, support) = pseudo_inverse_sqrt(&r);
        let complement = HermitianMatrix::identity(dim)
            .sub(&support)
            .scale(1.0 / k as f64);
        measurement = transported
            .iter()
            .map(|t| t.sandwich(r_inv_sqrt.matrix()).add(&complement))
            .collect();

        // The dual evaluation costs an eigendecomposition per key; after the
        // early iterations, amortize it.
        if iter < 20 || iter % 10 == 9 || iter == max_iter - 1 {
            let candidate = evaluate(&weighted, &measurement, dim);
            if candidate.primal_value > best.primal_value {
                best.primal_value = candidate.primal_value;
                best.measurement = candidate.measurement;
            }
            if candidate.dual_value < best.dual_value {
                best.dual_value = candidate.dual_value;
                best.dual_operator = candidate.dual_operator;
            }
        }
    }
    if best.gap() <= tol {
        return Ok(best);
    }
    Err(Error::GapNotClosed {
        gap: best.gap(),
        tol,
        iterations: max_iter,
        certificate: Box::new(best),
    })
}

/// `rho^{-1/2} W_j rho^{-1/2}` with `rho = sum_j W_j`, completed to a POVM on
/// the orthogonal complement of the support.
fn pretty_good_measurement(weighted: &[HermitianMatrix], dim: usize) -> Vec<HermitianMatrix> {
    let mut rho = HermitianMatrix::zeros(dim);
    for w in weighted {
        rho = rho.add(w);
    }
    let (inv_sqrt, support) = pseudo_inverse_sqrt(&rho);
    let complement = HermitianMatrix::identity(dim)
        .sub(&support)
        .scale(1.0 / weighted.len() as f64);
    weighted
        .iter()
        .map(|w| w.sandwich(inv_sqrt.matrix()).add(&complement))
        .collect()
}

/// Primal value of `measurement` plus the feasible dual point it induces.
fn evaluate(
    weighted: &[HermitianMatrix],
    measurement: &[HermitianMatrix],
    dim: usize,
) -> GuessingCertificate {
    let mut primal = 0.0;
    let mut y_raw = ComplexMatrix::zeros(dim, dim);
    for (w, m) in weighted.iter().zip(measurement) {
        let wm = w.matrix().matmul(m.matrix());
        primal += wm.trace().re;
        y_raw = y_raw.add(&wm);
    }
    let y0 = y_raw.hermitian_part();
    let mut shift = 0.0f64;
    for w in weighted {
        let top = eig_hermitian(&w.sub(&y0))
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(0.0);
        shift = shift.max(top);
    }
    let dual_operator = y0.add(&HermitianMatrix::identity(dim).scale(shift));
    let dual_value = dual_operator.trace();
    GuessingCertificate {
        measurement: measurement.to_vec(),
        dual_operator,
        primal_value: primal,
        dual_value,
    }
}

/// `(m^{-1/2}, support projector)` treating eigenvalues below
/// [`tolerance::PSEUDO_INVERSE_CUTOFF`] as zero.
fn pseudo_inverse_sqrt(m: &HermitianMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let eig = eig_hermitian(m);
    let dim = m.dim();
    let mut inv_sqrt = HermitianMatrix::zeros(dim);
    let mut support = HermitianMatrix::zeros(dim);
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        if *lambda > tolerance::PSEUDO_INVERSE_CUTOFF {
            let p = HermitianMatrix::outer(v);
            inv_sqrt = inv_sqrt.add(&p.scale(1.0 / lambda.sqrt()));
            support = support.add(&p);
        }
    }
    (inv_sqrt, support)
}
