//! Simulator for distributed PCPs: a committed Hadamard-encoded proof is
//! queried by every node of a network of constant-query randomized verifiers,
//! and the network accepts only when every node accepts.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2core`]: GF(2) vectors, Hadamard tables, the query-counting oracle,
//!   BLR linearity testing and self-correction.
//! - [`graphmodel`]: graphs, per-vertex inputs, language oracles, generators.
//! - [`prover`]: honest proofs and adversarial proof strategies.
//! - [`protocols`]: the per-node verifiers and the run loop.
//! - [`harness`]: exact and Monte Carlo acceptance measurement, soundness
//!   certification, sweeps, budget checks and CSV output.
//! - [`lcpbaseline`]: deterministic proof-labeling schemes and the cycle
//!   gluing attack.

pub mod gf2core;
pub mod graphmodel;
pub mod harness;
pub mod lcpbaseline;
pub mod protocols;
pub mod prover;
pub mod seed;

/// Exact probabilities.
pub type Prob = num_rational::BigRational;
