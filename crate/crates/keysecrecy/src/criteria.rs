//! The two secrecy criteria and per-state reports.
//!
//! A key is scored two ways: by the trace distance between its joint state
//! and the idealized joint state (criterion TD), and by how far the optimal
//! guessing probability sits from `2^-l` in relative terms (criterion HY).
//! The distinguishing advantage of the best possible distinguisher (the UC
//! advantage) coincides with the former.

use serde::{Deserialize, Serialize};

use crate::distinguish::{solve_guessing, GuessingCertificate};
use crate::error::{Error, Result};
use crate::numerics::{common_eigenbasis, trace_norm, HermitianMatrix};
use crate::states::CqState;
use crate::tolerance;

/// `d(rho_SE, ideal) = 1/2 sum_s || p_s rho_E^s - 2^-l rho_E ||_1`,
/// evaluated block by block (the joint operator is block-diagonal in the
/// key). Keys of weight zero contribute `2^-l / 2` each.
pub fn trace_distance_to_ideal(state: &CqState) -> Result<f64> {
    let uniform = 0.5f64.powi(state.key_len() as i32);
    let marginal = state.side_marginal();
    let ideal_block = marginal.scale(uniform);
    let mut sum = 0.0;
    let mut present = 0usize;
    for e in state.entries() {
        let block = state.side_of(e).scale(e.weight).sub(&ideal_block);
        sum += trace_norm(&block);
        present += 1;
    }
    // Absent keys: || 0 - 2^-l rho_E ||_1 = 2^-l.
    sum += (state.key_space() - present) as f64 * uniform;
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// Optimal probability of guessing the key from the side information,
/// with a certified bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuessingProbability {
    /// Reported value: exact for classical side information, bracket
    /// midpoint otherwise.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl GuessingProbability {
    fn exact(value: f64) -> Self {
        Self {
            value,
            lower: value,
            upper: value,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Number of conditional states up to which the pairwise commutator scan runs.
const CLASSICALITY_SCAN_CAP: usize = 256;

/// Classical instances (trivial, identical, or commuting side states) get an
/// exact common-eigenbasis evaluation; quantum instances go through the
/// certified solver, returning a bracket no wider than `tol`.
pub fn guessing_probability(state: &CqState, tol: f64) -> Result<GuessingProbability> {
    if tol <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)".into(),
        });
    }
    if let Some(exact) = classical_guessing_probability(state) {
        return Ok(GuessingProbability::exact(exact));
    }
    let cert = solve_guessing(state, tol, tolerance::SOLVER_MAX_ITER)?;
    Ok(bracket_from_certificate(state, &cert))
}

fn bracket_from_certificate(state: &CqState, cert: &GuessingCertificate) -> GuessingProbability {
    // The optimum is never below the best single-key guess or the uniform guess.
    let floor = state
        .max_key_prob()
        .max(0.5f64.powi(state.key_len() as i32));
    let lower = cert.primal_value.max(floor);
    let upper = cert.dual_value.min(1.0).max(lower);
    GuessingProbability {
        value: 0.5 * (lower + upper),
        lower,
        upper,
    }
}

/// Exact guessing probability when the side information is classical;
/// `None` when the conditional states genuinely fail to commute.
fn classical_guessing_probability(state: &CqState) -> Option<f64> {
    if state.has_trivial_side() {
        return Some(state.max_key_prob());
    }
    let sides: Vec<HermitianMatrix> = state.entries().iter().map(|e| state.side_of(e)).collect();
    // All conditional states equal: the side carries no information at all.
    let all_equal = sides
        .windows(2)
        .all(|w| w[0].sub(&w[1]).max_abs_entry() < tolerance::COMMUTATOR);
    if all_equal {
        return Some(state.max_key_prob());
    }
    if sides.len() > CLASSICALITY_SCAN_CAP {
        return None;
    }
    for i in 0..sides.len() {
        for j in (i + 1)..sides.len() {
            if sides[i].commutator(&sides[j]).max_abs_entry() > tolerance::COMMUTATOR {
                return None;
            }
        }
    }
    // Simultaneously diagonalizable: measure in the common eigenbasis and
    // guess the most likely key per outcome.
    let refs: Vec<&HermitianMatrix> = sides.iter().collect();
    let basis = common_eigenbasis(&refs, state.side_dim());
    let mut total = 0.0;
    for v in &basis {
        let mut best = 0.0f64;
        for (e, rho) in state.entries().iter().zip(&sides) {
            let mut expect = 0.0;
            for i in 0..state.side_dim() {
                let mut mv = num_complex::Complex64::new(0.0, 0.0);
                for (j, vj) in v.iter().enumerate() {
                    mv += rho.get(i, j) * vj;
                }
                expect += (v[i].conj() * mv).re;
            }
            best = best.max(e.weight * expect.max(0.0));
        }
        total += best;
    }
    Some(total.clamp(0.0, 1.0))
}

/// `| P(S|E) * 2^l - 1 |`, the relative error between the optimal guessing
/// probability and the uniform value `2^-l`.
pub fn hy_relative_error(state: &CqState, tol: f64) -> Result<f64> {
    let g = guessing_probability(state, tol)?;
    Ok(relative_error(g.value, state.key_len()))
}

fn relative_error(p_guess: f64, l: usize) -> f64 {
    (p_guess * 2.0f64.powi(l as i32) - 1.0).abs()
}

/// Worst-case relative error across the certified bracket. Exceeds
/// [`hy_relative_error`] only by the bracket width times `2^l`. A solver
/// that ran out of iterations still produced a valid (merely wider)
/// bracket, which is used as-is.
pub fn hy_relative_error_conservative(state: &CqState, tol: f64) -> Result<f64> {
    let g = match guessing_probability(state, tol) {
        Ok(g) => g,
        Err(Error::GapNotClosed { certificate, .. }) => {
            bracket_from_certificate(state, &certificate)
        }
        Err(e) => return Err(e),
    };
    let l = state.key_len();
    Ok(relative_error(g.lower, l).max(relative_error(g.upper, l)))
}

/// Everything the crate can say about one state's secrecy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub l: usize,
    /// Trace distance between the joint state and its idealization.
    pub td: f64,
    /// Optimal guessing probability (bracket midpoint when certified).
    pub p_guess: f64,
    pub p_guess_lower: f64,
    pub p_guess_upper: f64,
    /// Relative error of `p_guess` against `2^-l`.
    pub hy_rel_error: f64,
    /// Maximum distinguishing advantage against the ideal key.
    pub uc_advantage: f64,
    pub max_key_prob: f64,
    /// `sum_s max(0, p_s - 2^-l)`; equals `td` for trivial side information.
    pub avg_excess_prob: f64,
    pub epsilon_target: f64,
    pub verdict_td: bool,
    pub verdict_hy: bool,
}

/// Evaluate both criteria for `state` at secrecy target `epsilon`.
///
/// `verdict_hy` is decided conservatively: the relative error must stay
/// within `epsilon` across the whole certified bracket, not just at the
/// reported midpoint.
pub fn build_report(state: &CqState, epsilon: f64, tol: f64) -> Result<SecrecyReport> {
    if !(0.0..1.0).contains(&epsilon) || epsilon == 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1)".into(),
        });
    }
    let l = state.key_len();
    let td = trace_distance_to_ideal(state)?;
    let uc_advantage = crate::distinguish::uc_advantage(state)?;
    let g = guessing_probability(state, tol)?;
    let hy_rel_error = relative_error(g.value, l);
    let hy_worst = relative_error(g.lower, l).max(relative_error(g.upper, l));
    Ok(SecrecyReport {
        l,
        td,
        p_guess: g.value.clamp(0.0, 1.0),
        p_guess_lower: g.lower,
        p_guess_upper: g.upper,
        hy_rel_error,
        uc_advantage,
        max_key_prob: state.max_key_prob(),
        avg_excess_prob: state.average_excess_prob(),
        epsilon_target: epsilon,
        verdict_td: td <= epsilon,
        verdict_hy: hy_worst <= epsilon,
    })
}
