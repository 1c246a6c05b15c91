//! Acceptance measurement: exact probabilities on small instances, Monte
//! Carlo estimates with score intervals elsewhere, exhaustive soundness
//! certification, sweeps, budget checks and CSV output.

mod budget;
mod certify;
mod estimate;
mod exact;
mod sweep;

pub use budget::{proof_length, verify_budgets, DPCPParams};
pub use certify::{certify_soundness_exhaustive, render_rational, Measurement, Mode, SoundnessReport};
pub use estimate::{estimate_acceptance_probability, Estimate, MIN_TRIALS};
pub use exact::{exact_acceptance_probability, exact_cost, exact_feasible, EXACT_BUDGET};
pub use sweep::{
    cell_seed, certify_sweep, completeness_suite, generate_with_retries, soundness_sweep, write_csv, ProofSource,
    SweepInstance, SweepRow, SweepSpec, CSV_HEADER,
};

use crate::gf2core::Gf2Error;
use crate::graphmodel::GraphError;
use crate::protocols::ProtocolError;
use crate::prover::ProverError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("{what} of {requested} exceeds the budget of {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("at least {min} trials are required, got {0}", min = MIN_TRIALS)]
    TooFewTrials(u64),
    #[error("empty {0}")]
    EmptySuite(&'static str),
    #[error("{0}")]
    Config(String),
    #[error("csv output: {0}")]
    Csv(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}
