//! Distinguishers and optimal guessing.
//!
//! The brute-force subset maximization is the project's anti-regression
//! anchor: a deliberately exponential, obviously-correct implementation of
//! the maximum distinguishing advantage for classical distributions. The
//! Helstrom projector plays the same role for quantum state pairs, and the
//! certified primal-dual solver in [`solver`] handles optimal key guessing
//! with genuinely quantum side information.

mod solver;

use std::collections::BTreeSet;

use crate::criteria;
use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, trace_distance, HermitianMatrix, ProbabilityVector};
use crate::states::CqState;
use crate::tolerance;

pub use solver::{solve_guessing, GuessingCertificate};

/// A binary-outcome decision rule: a subset of outcomes classically, or a
/// binary measurement effect quantumly.
#[derive(Debug, Clone)]
pub enum Distinguisher {
    /// Outputs 1 exactly on the outcomes in `accept`.
    ClassicalSubset {
        n_outcomes: usize,
        accept: BTreeSet<usize>,
    },
    /// Outputs 1 with probability `tr(E rho)`; requires `0 <= E <= I`.
    BinaryMeasurement { effect: HermitianMatrix },
}

impl Distinguisher {
    pub fn classical(n_outcomes: usize, accept: BTreeSet<usize>) -> Result<Self> {
        if let Some(&i) = accept.iter().find(|&&i| i >= n_outcomes) {
            return Err(Error::IncompatibleDistinguisher(format!(
                "accept set contains outcome {i} outside 0..{n_outcomes}"
            )));
        }
        Ok(Self::ClassicalSubset { n_outcomes, accept })
    }

    pub fn measurement(effect: HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(&effect);
        let min = eig.min_eigenvalue();
        let max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -tolerance::STATE || max > 1.0 + tolerance::STATE {
            return Err(Error::IncompatibleDistinguisher(format!(
                "effect eigenvalues [{min}, {max}] outside [0, 1]"
            )));
        }
        Ok(Self::BinaryMeasurement { effect })
    }

    /// `|Prob[output 1 under p] - Prob[output 1 under q]|` for distributions.
    pub fn advantage_distributions(
        &self,
        p: &ProbabilityVector,
        q: &ProbabilityVector,
    ) -> Result<f64> {
        match self {
            Self::ClassicalSubset { n_outcomes, accept } => {
                if p.len() != *n_outcomes || q.len() != *n_outcomes {
                    return Err(Error::IncompatibleDistinguisher(format!(
                        "distinguisher over {n_outcomes} outcomes applied to ({}, {})",
                        p.len(),
                        q.len()
                    )));
                }
                let pa: f64 = accept.iter().map(|&i| p.as_slice()[i]).sum();
                let qa: f64 = accept.iter().map(|&i| q.as_slice()[i]).sum();
                Ok((pa - qa).abs())
            }
            Self::BinaryMeasurement { .. } => Err(Error::IncompatibleDistinguisher(
                "binary measurement applied to classical distributions".into(),
            )),
        }
    }

    /// `|tr(E (rho - sigma))|` for states.
    pub fn advantage_states(&self, rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
        match self {
            Self::BinaryMeasurement { effect } => {
                if effect.dim() != rho.dim() || effect.dim() != sigma.dim() {
                    return Err(Error::IncompatibleDistinguisher(format!(
                        "effect dimension {} applied to states of dimension ({}, {})",
                        effect.dim(),
                        rho.dim(),
                        sigma.dim()
                    )));
                }
                let diff = rho.sub(sigma);
                let t = effect.matrix().matmul(diff.matrix()).trace();
                Ok(t.re.abs())
            }
            Self::ClassicalSubset { .. } => Err(Error::IncompatibleDistinguisher(
                "classical subset applied to quantum states".into(),
            )),
        }
    }
}

/// Outcome cap for the exhaustive subset oracle (enumerates `2^n` subsets).
pub const ORACLE_MAX_OUTCOMES: usize = 20;

/// Maximum advantage over every subset distinguisher, by exhaustive
/// enumeration. Equals the statistical distance. Returns one maximizing
/// subset alongside the value.
pub fn brute_force_max_advantage(
    p: &ProbabilityVector,
    q: &ProbabilityVector,
) -> Result<(f64, Distinguisher)> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let n = p.len();
    if n > ORACLE_MAX_OUTCOMES {
        return Err(Error::OracleLimit {
            got: n,
            max: ORACLE_MAX_OUTCOMES,
        });
    }
    // Maximizing the signed difference suffices: the complement of any
    // subset flips its sign, so the maximum over all subsets is attained
    // with a non-negative sign (by the positive-excess set).
    let mut best_value = 0.0f64;
    let mut best_mask = 0u32;
    for mask in 0..(1u32 << n) {
        let mut diff = 0.0;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                diff += p.as_slice()[i] - q.as_slice()[i];
            }
        }
        if diff > best_value {
            best_value = diff;
            best_mask = mask;
        }
    }
    let accept: BTreeSet<usize> = (0..n).filter(|i| best_mask & (1 << i) != 0).collect();
    Ok((best_value, Distinguisher::classical(n, accept)?))
}

/// Maximum advantage via the positive-part sum; no outcome-count cap.
pub fn max_advantage_fast(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(p.as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| (a - b).max(0.0))
        .sum())
}

/// The optimal distinguisher between two states: the projector onto the
/// positive eigenspace of `rho - sigma`. Its advantage equals the trace
/// distance.
pub fn helstrom_advantage(
    rho: &HermitianMatrix,
    sigma: &HermitianMatrix,
) -> Result<(f64, Distinguisher)> {
    let value = trace_distance(rho, sigma)?;
    let eig = eig_hermitian(&rho.sub(sigma));
    let dim = rho.dim();
    let mut effect = HermitianMatrix::zeros(dim);
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        if *lambda > 0.0 {
            effect = effect.add(&HermitianMatrix::outer(v));
        }
    }
    Ok((value, Distinguisher::BinaryMeasurement { effect }))
}

/// Maximum advantage of any distinguisher between the joint state and its
/// idealization. Coincides with the trace distance to the ideal by the
/// optimality of the Helstrom distinguisher.
pub fn uc_advantage(state: &CqState) -> Result<f64> {
    criteria::trace_distance_to_ideal(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{statistical_distance, ComplexMatrix};
    use crate::rng::SeededRng;
    use crate::states::flip_zero_key;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket0() -> HermitianMatrix {
        HermitianMatrix::diagonal(&[1.0, 0.0])
    }

    fn ket1() -> HermitianMatrix {
        HermitianMatrix::diagonal(&[0.0, 1.0])
    }

    fn ket_plus() -> HermitianMatrix {
        HermitianMatrix::projector(&[c(1.0, 0.0), c(1.0, 0.0)])
    }

    fn random_distribution(rng: &mut SeededRng, n: usize) -> ProbabilityVector {
        let raw: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
        let sum: f64 = raw.iter().sum();
        ProbabilityVector::new(raw.into_iter().map(|x| x / sum).collect()).unwrap()
    }

    fn random_state(rng: &mut SeededRng, dim: usize) -> HermitianMatrix {
        let mut g = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let (x, y) = rng.normal_pair();
                g.set(i, j, c(x, y));
            }
        }
        let gg = g.matmul(&g.adjoint()).hermitian_part();
        gg.scale(1.0 / gg.trace())
    }

    #[test]
    fn advantage_examples() {
        let p = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        let u = ProbabilityVector::uniform(2);

        let all = Distinguisher::classical(2, [0, 1].into()).unwrap();
        assert_eq!(all.advantage_distributions(&p, &u).unwrap(), 0.0);

        let first = Distinguisher::classical(2, [0].into()).unwrap();
        assert!((first.advantage_distributions(&p, &u).unwrap() - 0.5).abs() < 1e-15);

        let effect = Distinguisher::measurement(ket0()).unwrap();
        let adv = effect.advantage_states(&ket0(), &ket_plus()).unwrap();
        assert!((adv - 0.5).abs() < 1e-12);
    }

    #[test]
    fn advantage_incompatibility_errors() {
        let d = Distinguisher::classical(2, [0].into()).unwrap();
        let p3 = ProbabilityVector::uniform(3);
        assert!(d
            .advantage_distributions(&p3, &ProbabilityVector::uniform(3))
            .is_err());
        assert!(d.advantage_states(&ket0(), &ket1()).is_err());
        assert!(Distinguisher::classical(2, [5].into()).is_err());
        // Effects must satisfy 0 <= E <= I.
        assert!(Distinguisher::measurement(HermitianMatrix::diagonal(&[1.5, 0.0])).is_err());
        assert!(Distinguisher::measurement(HermitianMatrix::diagonal(&[-0.1, 0.0])).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let p = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        let q = ProbabilityVector::new(vec![0.0, 1.0]).unwrap();
        let (v, d) = brute_force_max_advantage(&p, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        match d {
            Distinguisher::ClassicalSubset { accept, .. } => {
                assert_eq!(accept, [0].into());
            }
            _ => panic!("expected classical distinguisher"),
        }

        let (v, _) = brute_force_max_advantage(&p, &p).unwrap();
        assert_eq!(v, 0.0);

        // Flip-zero weights at l = 3 vs uniform: maximum 0.125, attained by
        // the positive-excess set {111}.
        let fz = flip_zero_key(3).unwrap().weights_dense();
        let u = ProbabilityVector::uniform(8);
        let (v, d) = brute_force_max_advantage(&fz, &u).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
        match d {
            Distinguisher::ClassicalSubset { accept, .. } => {
                assert_eq!(accept, [7].into());
            }
            _ => panic!("expected classical distinguisher"),
        }

        let big = ProbabilityVector::uniform(21);
        assert!(matches!(
            brute_force_max_advantage(&big, &big),
            Err(Error::OracleLimit { .. })
        ));
    }

    #[test]
    fn fast_path_matches_brute_force() {
        let mut rng = SeededRng::new(500);
        for _ in 0..500 {
            let n = 2 + rng.below(11);
            let p = random_distribution(&mut rng, n);
            let q = random_distribution(&mut rng, n);
            let (brute, _) = brute_force_max_advantage(&p, &q).unwrap();
            let fast = max_advantage_fast(&p, &q).unwrap();
            let sd = statistical_distance(&p, &q).unwrap();
            assert!((brute - fast).abs() < tolerance::EXACT_CLASSICAL);
            assert!((brute - sd).abs() < tolerance::EXACT_CLASSICAL);
        }
    }

    #[test]
    fn helstrom_examples() {
        let (v, d) = helstrom_advantage(&ket0(), &ket1()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        match &d {
            Distinguisher::BinaryMeasurement { effect } => {
                assert!(effect.sub(&ket0()).max_abs_entry() < 1e-12);
            }
            _ => panic!("expected measurement"),
        }

        let (v, _) = helstrom_advantage(&ket_plus(), &ket_plus()).unwrap();
        assert!(v < 1e-12);

        let (v, d) = helstrom_advantage(&ket0(), &ket_plus()).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((d.advantage_states(&ket0(), &ket_plus()).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn helstrom_achievability_on_random_pairs() {
        let mut rng = SeededRng::new(77);
        for _ in 0..100 {
            let dim = 2 + rng.below(7);
            let rho = random_state(&mut rng, dim);
            let sigma = random_state(&mut rng, dim);
            let (v, d) = helstrom_advantage(&rho, &sigma).unwrap();
            let achieved = d.advantage_states(&rho, &sigma).unwrap();
            assert!((v - achieved).abs() < tolerance::CROSS_CHECK);
        }
    }

    #[test]
    fn uc_advantage_examples() {
        use crate::states::{ideal_key, spike_key};
        assert!(uc_advantage(&ideal_key(3).unwrap()).unwrap() < 1e-14);
        // Scaled counterexample: the flip-zero key at l = 8 deviates from
        // ideal by exactly 2^-8.
        let fz = uc_advantage(&flip_zero_key(8).unwrap()).unwrap();
        assert!((fz - 0.00390625).abs() < 1e-15);
        let sp = uc_advantage(&spike_key(3, 0.05).unwrap()).unwrap();
        assert!((sp - 0.05).abs() < 1e-14);
    }

    #[test]
    fn randomized_distinguishers_never_beat_the_oracle() {
        let mut rng = SeededRng::new(4242);
        for _ in 0..50 {
            let n = 2 + rng.below(8);
            let p = random_distribution(&mut rng, n);
            let q = random_distribution(&mut rng, n);
            let (best, _) = brute_force_max_advantage(&p, &q).unwrap();
            // Randomized test: accept outcome i with probability t_i.
            for _ in 0..20 {
                let t: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
                let adv: f64 = t
                    .iter()
                    .zip(p.as_slice().iter().zip(q.as_slice()))
                    .map(|(ti, (pi, qi))| ti * (pi - qi))
                    .sum::<f64>()
                    .abs();
                assert!(adv <= best + 1e-12);
            }
        }
    }
}
