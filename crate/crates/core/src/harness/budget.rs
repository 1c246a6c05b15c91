use num_traits::{One, Zero};

use super::HarnessError;
use crate::graphmodel::LanguageId;
use crate::prover::part_count;
use crate::protocols::{ProtocolConfig, RunReport};
use crate::Prob;

/// The parameter tuple `(c, s, l, r, q)`: completeness, soundness, proof
/// bits, random bits per node, queries per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPCPParams {
    pub c: Prob,
    pub s: Prob,
    pub l: u64,
    pub r: u64,
    pub q: u64,
}

impl DPCPParams {
    pub fn new(c: Prob, s: Prob, l: u64, r: u64, q: u64) -> Result<Self, HarnessError> {
        if !(s >= Prob::zero() && s < c && c <= Prob::one()) {
            return Err(HarnessError::Config(format!("need 0 <= s < c <= 1, got c={c}, s={s}")));
        }
        Ok(DPCPParams { c, s, l, r, q })
    }

    /// `c = 1`, `s = 1/2`, the exact proof length, and this crate's per-node
    /// query and coin schedules for `cfg` on `n` vertices.
    pub fn documented(cfg: &ProtocolConfig, n: usize) -> Self {
        DPCPParams {
            c: Prob::one(),
            s: Prob::new(1.into(), 2.into()),
            l: proof_length(cfg.language, n),
            r: cfg.max_random_bits(n),
            q: cfg.max_queries(),
        }
    }
}

/// Proof bits: `2^n` for single-table protocols, `(n + 1) 2^n` for Span.
pub fn proof_length(language: LanguageId, n: usize) -> u64 {
    part_count(language, n) as u64 * (1u64 << n)
}

/// True iff every node stayed within `q` queries and `r` random bits and the
/// proof has at most `l` bits.
pub fn verify_budgets(report: &RunReport, params: &DPCPParams) -> bool {
    report.proof_bits <= params.l
        && report
            .nodes
            .iter()
            .all(|node| node.query_count <= params.q && node.random_bits_used <= params.r)
}
