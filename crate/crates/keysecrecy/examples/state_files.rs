//! The state-file schema: write a cq-state to JSON, read it back, and score
//! it — the same format the `keysecrecy analyze` and `compose` subcommands
//! consume.
//!
//! ```bash
//! cargo run --example state_files
//! ```

use keysecrecy::criteria::build_report;
use keysecrecy::jsonfmt::to_json_string;
use keysecrecy::numerics::HermitianMatrix;
use keysecrecy::states::{BitString, CqEntry, CqState};

fn main() -> keysecrecy::Result<()> {
    // A one-bit key with classical (diagonal, commuting) side information:
    // the adversary sees a noisy copy of the key bit.
    let state = CqState::new(
        1,
        2,
        vec![
            CqEntry {
                key: BitString::zeros(1)?,
                weight: 0.5,
                side: Some(HermitianMatrix::diagonal(&[0.85, 0.15])),
            },
            CqEntry {
                key: BitString::ones(1)?,
                weight: 0.5,
                side: Some(HermitianMatrix::diagonal(&[0.15, 0.85])),
            },
        ],
    )?;

    let text = serde_json::to_string_pretty(&state)?;
    println!("state file (schema: l, side_dim, entries[key, p, rho?]):\n{text}\n");

    // Round-trip through the schema, then score.
    let parsed: CqState = serde_json::from_str(&text)?;
    let report = build_report(&parsed, 0.5, 1e-8)?;
    println!("report:\n{}\n", to_json_string(&report)?);
    println!(
        "A noisy copy with 85% fidelity lets the adversary guess the bit with \
         probability {:.2}; trace distance to ideal is {:.2}.",
        report.p_guess, report.td
    );

    // Trivial side information omits `rho` entirely.
    let trivial = keysecrecy::states::flip_zero_key(2)?;
    println!("\ntrivial-side file:\n{}", serde_json::to_string(&trivial)?);
    Ok(())
}
