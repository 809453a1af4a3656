//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance referenced here is pinned in `keysecrecy::tolerance` or
//! stated inline next to the criterion it gates.

use std::process::Command;
use std::time::Instant;

use keysecrecy::compose::{run_otp_exact, OtpExperiment};
use keysecrecy::criteria::{guessing_probability, trace_distance_to_ideal, SecrecyReport};
use keysecrecy::distinguish::{
    brute_force_max_advantage, helstrom_advantage, max_advantage_fast, solve_guessing,
    Distinguisher,
};
use keysecrecy::numerics::{
    eig_hermitian, statistical_distance, trace_distance, trace_norm, ComplexMatrix,
    HermitianMatrix, ProbabilityVector,
};
use keysecrecy::rng::SeededRng;
use keysecrecy::states::{flip_zero_key, sample_random_cq, spike_key};
use keysecrecy::tolerance;
use num_complex::Complex64;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_keysecrecy"))
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
            g.set(i, j, Complex64::new(x, y));
        }
    }
    let gg = g.matmul(&g.adjoint()).hermitian_part();
    gg.scale(1.0 / gg.trace())
}

/// Criterion 1: `demo flip-zero --l 8` reports trace distance 2^-8,
/// guessing probability 2*2^-8, and relative error 1.0, within 1e-12,
/// in under a second.
#[test]
fn acceptance_1_counterexample_reproduction() {
    let started = Instant::now();
    let output = bin()
        .args(["demo", "flip-zero", "--l", "8", "--format", "json"])
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed();
    assert!(output.status.success(), "demo failed: {output:?}");
    let report: SecrecyReport = serde_json::from_slice(&output.stdout).expect("report parses");
    assert!(
        (report.td - 0.00390625).abs() <= 1e-12,
        "td = {}",
        report.td
    );
    assert!(
        (report.p_guess - 0.0078125).abs() <= 1e-12,
        "p_guess = {}",
        report.p_guess
    );
    assert!(
        (report.hy_rel_error - 1.0).abs() <= 1e-12,
        "hy_rel_error = {}",
        report.hy_rel_error
    );
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "took {:?}, budget 1 s",
        elapsed
    );
    println!("ACCEPTANCE 1 (counterexample reproduction): PASS");
}

/// Criterion 2: on 500 seeded random distribution pairs (n <= 12), the
/// exhaustive subset maximization equals the statistical distance and the
/// trace distance of the diagonal embeddings, all within 1e-12, in under
/// 60 s.
#[test]
fn acceptance_2_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = SeededRng::new(0xacce_0002);
    for trial in 0..500 {
        let n = 2 + rng.below(11); // 2..=12 outcomes
        let p = random_distribution(&mut rng, n);
        let q = random_distribution(&mut rng, n);
        let (brute, _) = brute_force_max_advantage(&p, &q).unwrap();
        let fast = max_advantage_fast(&p, &q).unwrap();
        let sd = statistical_distance(&p, &q).unwrap();
        let td = trace_distance(&p.to_diagonal(), &q.to_diagonal()).unwrap();
        assert!(
            (brute - sd).abs() <= 1e-12,
            "trial {trial}: brute {brute} vs sd {sd}"
        );
        assert!(
            (brute - fast).abs() <= 1e-12,
            "trial {trial}: brute {brute} vs fast {fast}"
        );
        assert!(
            (brute - td).abs() <= 1e-12,
            "trial {trial}: brute {brute} vs td {td}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    println!("ACCEPTANCE 2 (oracle equivalence): PASS");
}

/// Criterion 3: on 500 seeded random state pairs (dim <= 8), the
/// positive-eigenspace distinguisher attains the trace distance within
/// 1e-10 and no sampled randomized distinguisher exceeds it.
#[test]
fn acceptance_3_helstrom_identity() {
    let mut rng = SeededRng::new(0xacce_0003);
    for trial in 0..500 {
        let dim = 2 + rng.below(7); // 2..=8
        let rho = random_state(&mut rng, dim);
        let sigma = random_state(&mut rng, dim);
        let (value, best) = helstrom_advantage(&rho, &sigma).unwrap();
        let achieved = best.advantage_states(&rho, &sigma).unwrap();
        assert!(
            (value - achieved).abs() <= tolerance::CROSS_CHECK,
            "trial {trial}: helstrom {value} vs achieved {achieved}"
        );
        // Randomized tests: effects with eigenvalues drawn from [0, 1].
        for _ in 0..5 {
            let basis = eig_hermitian(&random_state(&mut rng, dim));
            let mut effect = HermitianMatrix::zeros(dim);
            for v in &basis.eigenvectors {
                effect = effect.add(&HermitianMatrix::outer(v).scale(rng.uniform()));
            }
            let d = Distinguisher::measurement(effect).unwrap();
            let adv = d.advantage_states(&rho, &sigma).unwrap();
            assert!(
                adv <= value + tolerance::CROSS_CHECK,
                "trial {trial}: randomized distinguisher beat the bound: {adv} > {value}"
            );
        }
    }
    println!("ACCEPTANCE 3 (Helstrom identity): PASS");
}

/// Criterion 4: on 200 seeded two-key instances the solver matches the
/// closed form `(1 + ||p0 rho0 - p1 rho1||_1) / 2` within 1e-8 with
/// certified gap <= 1e-8; the |0>/|+> instance gives 1/2 + sqrt(2)/4.
#[test]
fn acceptance_4_guessing_solver() {
    use keysecrecy::states::{BitString, CqEntry, CqState};

    let two_key = |p0: f64, rho0: HermitianMatrix, rho1: HermitianMatrix| {
        CqState::new(
            1,
            rho0.dim(),
            vec![
                CqEntry {
                    key: BitString::zeros(1).unwrap(),
                    weight: p0,
                    side: Some(rho0),
                },
                CqEntry {
                    key: BitString::ones(1).unwrap(),
                    weight: 1.0 - p0,
                    side: Some(rho1),
                },
            ],
        )
        .unwrap()
    };

    let mut rng = SeededRng::new(0xacce_0004);
    for trial in 0..200 {
        let dim = 2 + rng.below(7); // 2..=8
        let p0 = 0.05 + 0.9 * rng.uniform();
        let rho0 = random_state(&mut rng, dim);
        let rho1 = random_state(&mut rng, dim);
        let state = two_key(p0, rho0.clone(), rho1.clone());
        let cert = solve_guessing(&state, tolerance::SOLVER_GAP, tolerance::SOLVER_MAX_ITER)
            .unwrap_or_else(|e| panic!("trial {trial}: solver failed: {e}"));
        assert!(cert.gap() <= 1e-8, "trial {trial}: gap {}", cert.gap());
        let closed_form = 0.5 * (1.0 + trace_norm(&rho0.scale(p0).sub(&rho1.scale(1.0 - p0))));
        assert!(
            (cert.midpoint() - closed_form).abs() <= 1e-8,
            "trial {trial}: solver {} vs closed form {closed_form}",
            cert.midpoint()
        );
    }

    let rho0 = HermitianMatrix::diagonal(&[1.0, 0.0]);
    let rho1 = HermitianMatrix::projector(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
    let cert = solve_guessing(
        &two_key(0.5, rho0, rho1),
        tolerance::SOLVER_GAP,
        tolerance::SOLVER_MAX_ITER,
    )
    .unwrap();
    let expected = 0.5 + 2.0f64.sqrt() / 4.0;
    assert!(
        (cert.midpoint() - expected).abs() <= 1e-8,
        "|0>/|+>: {} vs {expected}",
        cert.midpoint()
    );
    println!("ACCEPTANCE 4 (guessing solver): PASS");
}

/// Criterion 5: exhaustive one-time-pad experiments over flip-zero and spike
/// keys at l <= 10 plus 200 random trivial-side states show
/// `inflation <= trace distance + 1e-12`, with equality for flip-zero, in
/// under 60 s.
#[test]
fn acceptance_5_composition_bound() {
    let started = Instant::now();
    let mut checked = 0usize;
    let mut run = |state: keysecrecy::states::CqState, expect_equality: bool| {
        let td = trace_distance_to_ideal(&state).unwrap();
        let exp = OtpExperiment::uniform_messages(state).unwrap();
        let out = run_otp_exact(&exp).unwrap();
        assert!(
            out.inflation <= td + tolerance::COMPOSITION,
            "inflation {} > td {td}",
            out.inflation
        );
        if expect_equality {
            assert!(
                (out.inflation - td).abs() <= tolerance::COMPOSITION,
                "flip-zero equality violated: inflation {} vs td {td}",
                out.inflation
            );
        }
        checked += 1;
    };

    for l in 2..=10 {
        run(flip_zero_key(l).unwrap(), true);
    }
    for l in 2..=10usize {
        for &delta in &[0.001, 0.05, 0.3] {
            if delta < 1.0 - 0.5f64.powi(l as i32) {
                run(spike_key(l, delta).unwrap(), false);
            }
        }
    }
    let mut rng = SeededRng::new(0xacce_0005);
    for _ in 0..200 {
        let l = 1 + rng.below(3);
        let seed = rng.next_u64();
        run(sample_random_cq(l, 1, seed).unwrap(), false);
    }
    assert!(checked >= 200 + 9);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    println!("ACCEPTANCE 5 (composition bound): PASS");
}

/// Criterion 6: `verify all --samples 1000 --seed 7` passes every check,
/// reproduces the stated witnesses, and emits byte-identical JSON on rerun.
#[test]
fn acceptance_6_implication_bench() {
    let run = || {
        bin()
            .args([
                "verify",
                "all",
                "--samples",
                "1000",
                "--seed",
                "7",
                "--format",
                "json",
            ])
            .output()
            .expect("binary runs")
    };
    let first = run();
    assert!(
        first.status.success(),
        "verify all failed: {}",
        String::from_utf8_lossy(&first.stdout)
    );
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);

    assert_eq!(checks[0]["name"], "TD_implies_UC");
    assert_eq!(checks[0]["passed"], true);
    assert_eq!(checks[0]["violations"].as_array().unwrap().len(), 0);

    assert_eq!(checks[1]["name"], "HY_implies_UC");
    assert_eq!(checks[1]["passed"], true);
    assert_eq!(checks[1]["violations"].as_array().unwrap().len(), 0);

    assert_eq!(checks[2]["name"], "TD_not_implies_HY");
    assert_eq!(checks[2]["passed"], true);
    let hy = checks[2]["witness"]["hy_rel_error"].as_f64().unwrap();
    assert!((hy - 1.024).abs() <= 1e-9, "witness hy_rel_error = {hy}");

    assert_eq!(checks[3]["name"], "HY_not_necessary");
    assert_eq!(checks[3]["passed"], true);
    let uc = checks[3]["witness"]["uc_advantage"].as_f64().unwrap();
    assert!((uc - 0.00390625).abs() <= 1e-12);

    let second = run();
    assert!(second.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "rerun with the same seed must be byte-identical"
    );
    println!("ACCEPTANCE 6 (implication bench): PASS");
}

/// Criterion 7: `td <= 2^l (p_guess - 2^-l) + 1e-10` on all constructed and
/// 1000 sampled classical states (trivial side information and commuting
/// diagonal side information).
#[test]
fn acceptance_7_classical_guessing_bound() {
    use keysecrecy::states::{BitString, CqEntry, CqState};

    let mut states: Vec<CqState> = Vec::new();
    for l in 2..=10 {
        states.push(flip_zero_key(l).unwrap());
    }
    for &(l, delta) in &[(2usize, 0.1f64), (3, 0.05), (5, 0.2), (10, 0.001)] {
        states.push(spike_key(l, delta).unwrap());
    }
    let mut rng = SeededRng::new(0xacce_0007);
    for trial in 0..1000 {
        let l = 1 + rng.below(3);
        let seed = rng.next_u64();
        if trial % 2 == 0 {
            states.push(sample_random_cq(l, 1, seed).unwrap());
        } else {
            // Classical but non-trivial side information: diagonal
            // conditional states over a shared eigenbasis.
            let template = sample_random_cq(l, 1, seed).unwrap();
            let side_dim = 2 + rng.below(3);
            let entries = template
                .entries()
                .iter()
                .map(|e| {
                    let raw: Vec<f64> = (0..side_dim).map(|_| rng.exponential()).collect();
                    let sum: f64 = raw.iter().sum();
                    let diag: Vec<f64> = raw.into_iter().map(|x| x / sum).collect();
                    CqEntry {
                        key: BitString::new(l, e.key.index() as u32).unwrap(),
                        weight: e.weight,
                        side: Some(HermitianMatrix::diagonal(&diag)),
                    }
                })
                .collect();
            states.push(CqState::new(l, side_dim, entries).unwrap());
        }
    }
    for (i, state) in states.iter().enumerate() {
        let l = state.key_len();
        let td = trace_distance_to_ideal(state).unwrap();
        let g = guessing_probability(state, tolerance::SOLVER_GAP).unwrap();
        let bound = 2.0f64.powi(l as i32) * (g.value - 0.5f64.powi(l as i32));
        assert!(
            td <= bound + 1e-10,
            "state {i}: td {td} > 2^l (p_guess - 2^-l) = {bound}"
        );
    }
    println!("ACCEPTANCE 7 (classical guessing bound): PASS");
}
