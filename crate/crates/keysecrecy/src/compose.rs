//! Executable composition semantics: one-time-pad encryption with an
//! imperfect key.
//!
//! The monitored event is "the adversary guesses the encrypted message from
//! the ciphertext". With an ideal key its probability is `max_m Pr[m]`; with
//! a real key the probability can only inflate by the key's distinguishing
//! advantage from ideal. The flip-zero construction attains that bound with
//! equality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ProbabilityVector;
use crate::rng::SeededRng;
use crate::states::CqState;

/// Largest key length for which the exact exhaustive path runs
/// (`2^l x 2^l` message/ciphertext table).
pub const MAX_EXACT_OTP_LEN: usize = 12;

/// The monitored adversarial event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryEvent {
    GuessesMessage,
}

/// A one-time-pad run: key state, message distribution, monitored event.
#[derive(Debug, Clone)]
pub struct OtpExperiment {
    key_state: CqState,
    message_dist: ProbabilityVector,
    pub event: AdversaryEvent,
}

/// Exact event probabilities for one experiment.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OtpOutcome {
    /// `sum_c Pr[c] max_m Pr[m | c]` under the real key.
    pub p_real: f64,
    /// The same event probability under an ideal key: `max_m Pr[m]`.
    pub p_ideal: f64,
    /// `p_real - p_ideal`.
    pub inflation: f64,
}

/// Monte-Carlo estimate of the real event probability.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OtpEstimate {
    pub p_real_hat: f64,
    /// Binomial standard error of the estimate.
    pub stderr: f64,
    pub trials: usize,
}

impl OtpExperiment {
    /// Requires trivial side information (the composition bound is
    /// demonstrated classically, where exact enumeration is possible) and a
    /// message distribution over the full space `{0,1}^l`.
    pub fn new(key_state: CqState, message_dist: ProbabilityVector) -> Result<Self> {
        if !key_state.has_trivial_side() {
            return Err(Error::UnsupportedConfiguration(
                "one-time-pad composition requires trivial side information".into(),
            ));
        }
        if message_dist.len() != key_state.key_space() {
            return Err(Error::LengthMismatch {
                left: message_dist.len(),
                right: key_state.key_space(),
            });
        }
        Ok(Self {
            key_state,
            message_dist,
            event: AdversaryEvent::GuessesMessage,
        })
    }

    /// Uniform messages over `{0,1}^l`.
    pub fn uniform_messages(key_state: CqState) -> Result<Self> {
        let n = key_state.key_space();
        Self::new(key_state, ProbabilityVector::uniform(n))
    }

    pub fn key_len(&self) -> usize {
        self.key_state.key_len()
    }

    pub fn key_state(&self) -> &CqState {
        &self.key_state
    }

    /// The maximum-likelihood guess per ciphertext, ties broken toward the
    /// lexicographically smallest message.
    fn best_response(&self) -> Vec<usize> {
        let n = self.key_state.key_space();
        let key = self.key_state.weights_dense();
        let msg = self.message_dist.as_slice();
        (0..n)
            .map(|c| {
                let mut best_m = 0;
                let mut best_p = -1.0;
                for (m, &pm) in msg.iter().enumerate() {
                    let joint = pm * key.as_slice()[m ^ c];
                    if joint > best_p {
                        best_p = joint;
                        best_m = m;
                    }
                }
                best_m
            })
            .collect()
    }
}

/// Exhaustive evaluation of the experiment. `l <= 12`.
pub fn run_otp_exact(exp: &OtpExperiment) -> Result<OtpOutcome> {
    let l = exp.key_len();
    if l > MAX_EXACT_OTP_LEN {
        return Err(Error::KeyLengthOutOfRange {
            l,
            min: 1,
            max: MAX_EXACT_OTP_LEN,
        });
    }
    let n = exp.key_state.key_space();
    let key = exp.key_state.weights_dense();
    let msg = exp.message_dist.as_slice();
    let mut p_real = 0.0;
    for c in 0..n {
        let mut best = 0.0f64;
        for (m, &pm) in msg.iter().enumerate() {
            best = best.max(pm * key.as_slice()[m ^ c]);
        }
        p_real += best;
    }
    let p_ideal = msg.iter().copied().fold(0.0, f64::max);
    Ok(OtpOutcome {
        p_real,
        p_ideal,
        inflation: p_real - p_ideal,
    })
}

/// Frequency estimate of the real event probability using the fixed
/// best-response strategy from the exact path. Deterministic per seed.
pub fn run_otp_montecarlo(exp: &OtpExperiment, trials: usize, seed: u64) -> Result<OtpEstimate> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
            range: "1..".into(),
        });
    }
    if exp.key_len() > MAX_EXACT_OTP_LEN {
        return Err(Error::KeyLengthOutOfRange {
            l: exp.key_len(),
            min: 1,
            max: MAX_EXACT_OTP_LEN,
        });
    }
    let guess = exp.best_response();
    let key_cdf = cumulative(exp.key_state.weights_dense().as_slice());
    let msg_cdf = cumulative(exp.message_dist.as_slice());
    let mut rng = SeededRng::new(seed);
    let mut successes = 0usize;
    for _ in 0..trials {
        let k = sample_from_cdf(&key_cdf, rng.uniform());
        let m = sample_from_cdf(&msg_cdf, rng.uniform());
        let c = m ^ k;
        if guess[c] == m {
            successes += 1;
        }
    }
    let p = successes as f64 / trials as f64;
    Ok(OtpEstimate {
        p_real_hat: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    })
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn sample_from_cdf(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::trace_distance_to_ideal;
    use crate::states::{flip_zero_key, ideal_key, sample_random_cq, spike_key};
    use crate::tolerance;

    #[test]
    fn ideal_key_gives_zero_inflation() {
        let exp = OtpExperiment::uniform_messages(ideal_key(3).unwrap()).unwrap();
        let out = run_otp_exact(&exp).unwrap();
        assert!((out.p_real - 0.125).abs() < 1e-15);
        assert!((out.p_ideal - 0.125).abs() < 1e-15);
        assert!(out.inflation.abs() < 1e-15);
    }

    #[test]
    fn flip_zero_inflation_attains_trace_distance() {
        let exp = OtpExperiment::uniform_messages(flip_zero_key(3).unwrap()).unwrap();
        let out = run_otp_exact(&exp).unwrap();
        assert!((out.p_real - 0.25).abs() < 1e-15);
        assert!((out.p_ideal - 0.125).abs() < 1e-15);
        assert!((out.inflation - 0.125).abs() < 1e-15);
        // The adversary's best response decodes c to m = c xor 11...1.
        let guess = exp.best_response();
        for (c, &m) in guess.iter().enumerate() {
            assert_eq!(m, c ^ 0b111);
        }
    }

    #[test]
    fn spike_inflation_equals_delta() {
        let exp = OtpExperiment::uniform_messages(spike_key(3, 0.05).unwrap()).unwrap();
        let out = run_otp_exact(&exp).unwrap();
        assert!((out.inflation - 0.05).abs() < 1e-15);
    }

    #[test]
    fn inflation_never_exceeds_trace_distance() {
        for seed in 0..100 {
            let l = 1 + (seed as usize % 3);
            let state = sample_random_cq(l, 1, seed).unwrap();
            let td = trace_distance_to_ideal(&state).unwrap();
            let exp = OtpExperiment::uniform_messages(state).unwrap();
            let out = run_otp_exact(&exp).unwrap();
            assert!(
                out.inflation <= td + tolerance::COMPOSITION,
                "seed {seed}: inflation {} > td {td}",
                out.inflation
            );
        }
    }

    #[test]
    fn one_time_pad_perfect_under_ideal_key_any_messages() {
        let mut rng = crate::rng::SeededRng::new(17);
        for l in 1..=3usize {
            let n = 1usize << l;
            let raw: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
            let sum: f64 = raw.iter().sum();
            let msg = ProbabilityVector::new(raw.into_iter().map(|x| x / sum).collect()).unwrap();
            let exp = OtpExperiment::new(ideal_key(l).unwrap(), msg).unwrap();
            let out = run_otp_exact(&exp).unwrap();
            assert!(out.inflation.abs() < tolerance::COMPOSITION);
        }
    }

    #[test]
    fn montecarlo_within_five_sigma_and_deterministic() {
        let exp = OtpExperiment::uniform_messages(flip_zero_key(3).unwrap()).unwrap();
        let est = run_otp_montecarlo(&exp, 1_000_000, 99).unwrap();
        assert!((est.p_real_hat - 0.25).abs() <= 5.0 * est.stderr);
        let again = run_otp_montecarlo(&exp, 1_000_000, 99).unwrap();
        assert_eq!(est.p_real_hat, again.p_real_hat);

        let ideal = OtpExperiment::uniform_messages(ideal_key(3).unwrap()).unwrap();
        let est = run_otp_montecarlo(&ideal, 100_000, 7).unwrap();
        assert!((est.p_real_hat - 0.125).abs() <= 5.0 * est.stderr.max(1e-3));
    }

    #[test]
    fn exact_path_is_capped_at_l_12() {
        let exp = OtpExperiment::uniform_messages(flip_zero_key(13).unwrap()).unwrap();
        assert!(matches!(
            run_otp_exact(&exp),
            Err(Error::KeyLengthOutOfRange { l: 13, .. })
        ));
        assert!(matches!(
            run_otp_montecarlo(&exp, 10, 1),
            Err(Error::KeyLengthOutOfRange { l: 13, .. })
        ));
        let small = OtpExperiment::uniform_messages(flip_zero_key(2).unwrap()).unwrap();
        assert!(matches!(
            run_otp_montecarlo(&small, 0, 1),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn quantum_side_information_is_rejected() {
        let state = sample_random_cq(2, 2, 5).unwrap();
        match OtpExperiment::uniform_messages(state) {
            Err(Error::UnsupportedConfiguration(_)) => {}
            other => panic!("expected unsupported configuration, got {other:?}"),
        }
    }
}
