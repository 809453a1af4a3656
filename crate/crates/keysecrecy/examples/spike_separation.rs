//! The trace-distance criterion does not imply the guessing-probability
//! criterion: a single inflated outcome separates them by a factor 2^l.
//!
//! ```bash
//! cargo run --example spike_separation
//! ```

use keysecrecy::criteria::build_report;
use keysecrecy::states::spike_key;

fn main() -> keysecrecy::Result<()> {
    let delta = 0.001;
    println!("spike keys with excess delta = {delta} on one outcome:");
    println!("l    td (= delta)   hy_rel_error (= delta * 2^l)");
    for l in [2usize, 4, 6, 8, 10] {
        let state = spike_key(l, delta)?;
        // Scored at epsilon = delta the trace-distance criterion holds with
        // equality while the guessing criterion fails by a factor 2^l.
        let report = build_report(&state, delta, 1e-8)?;
        println!("{l:<4} {:<14.10} {:<14.10}", report.td, report.hy_rel_error);
        assert!(report.verdict_td);
        assert!(!report.verdict_hy);
    }
    println!();
    println!("Both criteria see the same state; they simply aggregate differently.");
    println!("The trace distance averages the excess over outcomes, the guessing");
    println!("probability looks only at the largest one - so a fixed trace-distance");
    println!("budget allows a single outcome to exceed uniform by the full budget.");
    Ok(())
}
