//! Executable secrecy criteria for cryptographic keys.
//!
//! A key produced by a real protocol is never perfectly secret; its quality
//! is summarized by how well the best possible distinguisher can tell it
//! from an ideal key (uniform, independent of everything the adversary
//! holds). This crate makes the two standard ways of scoring that quality
//! executable and exactly comparable at desk scale:
//!
//! * **Criterion TD** - the trace distance between the joint key/side
//!   information state and its idealization is at most epsilon. Equal to the
//!   maximum distinguishing advantage, so it transfers to any application:
//!   an event's probability can inflate by at most epsilon when an ideal key
//!   is replaced by a TD-satisfying one.
//! * **Criterion HY** - the optimal guessing probability of the key equals
//!   `2^-l` up to relative error epsilon.
//!
//! The [`harness`] module runs the logical relations between the two as
//! batch experiments: HY implies TD (and hence composable secrecy) for
//! classical side information, TD does not imply HY (witness: a spike
//! distribution), and HY is *not necessary* for composable secrecy
//! (witness: the flip-zero key, which reroutes one outcome of an ideal key
//! and thereby doubles the best guess while moving only `2^-l` in trace
//! distance).
//!
//! Everything is exact at small key lengths: distances reduce to finite
//! sums, guessing probabilities are either classical maxima or certified
//! brackets from a primal-dual solver, and the one-time-pad composition
//! experiment enumerates every ciphertext.
//!
//! Start with the runnable examples (`cargo run --example
//! flip_zero_counterexample`) or the `keysecrecy` binary (`keysecrecy demo
//! flip-zero --l 8`).

pub mod cli;
pub mod compose;
pub mod criteria;
pub mod distinguish;
pub mod error;
pub mod harness;
pub mod jsonfmt;
pub mod numerics;
pub mod rng;
pub mod states;
pub mod tolerance;

pub use error::{Error, Result};
