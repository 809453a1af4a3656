//! Distances between states and distributions, and the distinguishers that
//! attain them.
//!
//! ```bash
//! cargo run --example trace_distance
//! ```

use keysecrecy::distinguish::{brute_force_max_advantage, helstrom_advantage};
use keysecrecy::numerics::{
    statistical_distance, trace_distance, HermitianMatrix, ProbabilityVector,
};
use num_complex::Complex64;

fn main() -> keysecrecy::Result<()> {
    // Two pure qubit states: |0> and |+>.
    let ket0 = HermitianMatrix::diagonal(&[1.0, 0.0]);
    let ket_plus =
        HermitianMatrix::projector(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);

    let d = trace_distance(&ket0, &ket_plus)?;
    println!("d(|0><0|, |+><+|)          = {d:.12}  (exactly 1/sqrt(2))");

    // The Helstrom distinguisher attains that distance as its advantage.
    let (value, best) = helstrom_advantage(&ket0, &ket_plus)?;
    let achieved = best.advantage_states(&ket0, &ket_plus)?;
    println!("helstrom advantage          = {value:.12}");
    println!("achieved by its projector   = {achieved:.12}");

    // Classically the same quantity is the statistical distance, and the
    // exhaustive search over all 2^n accept-sets finds it.
    let p = ProbabilityVector::new(vec![0.5, 0.3, 0.2])?;
    let q = ProbabilityVector::uniform(3);
    let sd = statistical_distance(&p, &q)?;
    let (brute, which) = brute_force_max_advantage(&p, &q)?;
    println!("statistical distance        = {sd:.12}");
    println!("best subset advantage       = {brute:.12}  via {which:?}");

    // Diagonal embeddings close the loop: classical distance is the trace
    // distance of the corresponding diagonal operators.
    let td = trace_distance(&p.to_diagonal(), &q.to_diagonal())?;
    println!("trace distance of diagonals = {td:.12}");
    Ok(())
}
