//! The full implication bench, in-process: which criterion implies which,
//! demonstrated over constructed and sampled states.
//!
//! ```bash
//! cargo run --example implication_bench
//! ```

use keysecrecy::harness::{
    check_hy_implies_uc, check_hy_not_necessary, check_td_implies_uc, check_td_not_implies_hy,
    ImplicationResult,
};

fn show(result: &ImplicationResult) {
    println!(
        "{:<20} {}  ({} instances, {} violations, eps = {:e})",
        result.name.as_str(),
        if result.passed { "PASS" } else { "FAIL" },
        result.instances_tested,
        result.violations.len(),
        result.epsilon,
    );
    if let Some(w) = &result.witness {
        println!(
            "    witness {}: td = {:.10}, uc = {:.10}, p_guess = {:.10}, hy_rel_error = {:.10}",
            w.descriptor, w.td, w.uc_advantage, w.p_guess, w.hy_rel_error
        );
    }
    if let Some(q) = &result.quantum_findings {
        println!(
            "    quantum side (recorded, not asserted): {} instances, max uc/eps = {:.4}, {} findings",
            q.instances, q.max_uc_to_eps_ratio, q.violations_observed
        );
    }
}

fn main() -> keysecrecy::Result<()> {
    let samples = 200;
    let seed = 7;

    // Positive direction: epsilon-closeness to ideal caps every
    // distinguisher's advantage and every application's event inflation.
    show(&check_td_implies_uc(samples, seed, 1.0)?);

    // Positive direction: near-uniform guessing odds imply closeness to
    // ideal (asserted classically, recorded for quantum side information).
    show(&check_hy_implies_uc(samples, seed, 0.01)?);

    // Separation: a fixed trace-distance budget does not constrain the
    // single largest outcome to the same budget.
    show(&check_td_not_implies_hy(10, 0.001)?);

    // Non-necessity: a composably secret key may still be guessable twice
    // as often as ideal.
    show(&check_hy_not_necessary(8, 0.01)?);

    Ok(())
}
