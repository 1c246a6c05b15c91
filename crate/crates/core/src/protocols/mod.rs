//! Per-node verifiers for the three dPCP protocols and the run loop that
//! combines their verdicts.

mod exchange;
mod verifiers;

use std::fmt;

pub use exchange::NeighborExchange;
pub use verifiers::{
    nonbipartite_decide, nonbipartite_query_phase, run_leader_verifier, run_span_verifier,
    NonbipartiteState, PassOutcome,
};

use crate::gf2core::{Gf2Error, MultiProof, OracleSession};
use crate::graphmodel::{GraphError, Instance, LanguageId};
use crate::prover::part_count;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("proof shape {parts}x2^{dim} does not match the expected {expected_parts}x2^{expected_dim}")]
    Shape {
        parts: usize,
        dim: usize,
        expected_parts: usize,
        expected_dim: usize,
    },
    #[error("node {0} never published its value")]
    MissingPublication(usize),
    #[error("node {0} published twice in one pass")]
    DuplicatePublication(usize),
    #[error("repetition counts must be at least 1")]
    ZeroRepetitions,
    #[error(transparent)]
    Input(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] Gf2Error),
}

/// Verifier parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProtocolConfig {
    pub language: LanguageId,
    /// BLR repetitions per tested table per pass.
    pub blr_repetitions: u32,
    /// Independent passes per node, AND-combined.
    pub verifier_repetitions: u32,
}

impl ProtocolConfig {
    pub fn new(language: LanguageId) -> Self {
        ProtocolConfig {
            language,
            blr_repetitions: 1,
            verifier_repetitions: 1,
        }
    }

    pub fn with_blr_repetitions(mut self, k: u32) -> Self {
        self.blr_repetitions = k;
        self
    }

    pub fn with_verifier_repetitions(mut self, k: u32) -> Self {
        self.verifier_repetitions = k;
        self
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.blr_repetitions == 0 || self.verifier_repetitions == 0 {
            return Err(ProtocolError::ZeroRepetitions);
        }
        Ok(())
    }

    /// Most queries any node makes in one pass.
    ///
    /// Nonbipartite and Leader: `3k + 4`. Span: `9k + 12` for a non-root node
    /// with a syntactically valid parent, `3k + 4` otherwise.
    pub fn queries_per_pass(&self) -> u64 {
        let k = u64::from(self.blr_repetitions);
        match self.language {
            LanguageId::Nonbipartite | LanguageId::Leader => 3 * k + 4,
            LanguageId::Span => 9 * k + 12,
        }
    }

    /// Random bits any node draws in one pass on `n` vertices: `(2k + 2)n`
    /// for every language. Span's tree checks reuse the Leader pass's coins.
    pub fn random_bits_per_pass(&self, n: usize) -> u64 {
        (2 * u64::from(self.blr_repetitions) + 2) * n as u64
    }

    /// Per-node query bound over all passes.
    pub fn max_queries(&self) -> u64 {
        self.queries_per_pass() * u64::from(self.verifier_repetitions)
    }

    pub fn max_random_bits(&self, n: usize) -> u64 {
        self.random_bits_per_pass(n) * u64::from(self.verifier_repetitions)
    }
}

/// Names of the individual checks, reported for the first one that fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    /// Linearity test on the single table (or Span's part 0).
    Blr,
    /// Self-corrected `α·e_i` against the input bit.
    Input,
    /// Exactly two distinct other neighbors published a one.
    Neighbors,
    /// Self-corrected `α·𝟙 = 1`.
    Parity,
    /// Self-corrected `α·r_i = 0` at a point punctured at `i`.
    Punctured,
    /// The Span input names a neighbor or the root marker.
    ParentSyntax,
    /// Linearity tests on the node's and its parent's parts.
    TreeBlr,
    /// `α_i·e_i ⊕ α_p·e_i = 1`.
    TreeUnit,
    /// `α_i·r_i ⊕ α_p·r_i = 0`.
    TreePunctured,
}

impl CheckId {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Blr => "blr",
            CheckId::Input => "input",
            CheckId::Neighbors => "neighbors",
            CheckId::Parity => "parity",
            CheckId::Punctured => "punctured",
            CheckId::ParentSyntax => "parent-syntax",
            CheckId::TreeBlr => "tree-blr",
            CheckId::TreeUnit => "tree-unit",
            CheckId::TreePunctured => "tree-punctured",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One node's result over all passes of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeReport {
    pub accepted: bool,
    /// First failing check of the first rejecting pass.
    pub failed_check: Option<CheckId>,
    pub query_count: u64,
    pub random_bits_used: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub nodes: Vec<NodeReport>,
    pub proof_bits: u64,
}

impl RunReport {
    /// True iff every node accepted.
    pub fn accepted(&self) -> bool {
        self.nodes.iter().all(|r| r.accepted)
    }

    pub fn max_queries(&self) -> u64 {
        self.nodes.iter().map(|r| r.query_count).max().unwrap_or(0)
    }

    pub fn max_random_bits(&self) -> u64 {
        self.nodes.iter().map(|r| r.random_bits_used).max().unwrap_or(0)
    }

    pub fn rejecting_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.nodes[i].accepted).collect()
    }
}

pub fn check_shape(inst: &Instance, proof: &MultiProof, language: LanguageId) -> Result<(), ProtocolError> {
    let expected_parts = part_count(language, inst.n());
    if proof.part_count() != expected_parts || proof.dim() != inst.n() {
        return Err(ProtocolError::Shape {
            parts: proof.part_count(),
            dim: proof.dim(),
            expected_parts,
            expected_dim: inst.n(),
        });
    }
    Ok(())
}

/// One run of the whole network. Node `i` in pass `p` draws its coins from
/// `seed::node_pass_seed(seed, i, p)`, so runs are reproducible per seed.
pub fn run_protocol(
    inst: &Instance,
    proof: &MultiProof,
    cfg: &ProtocolConfig,
    seed: u64,
) -> Result<RunReport, ProtocolError> {
    cfg.validate()?;
    check_shape(inst, proof, cfg.language)?;
    let n = inst.n();
    let mut nodes = vec![
        NodeReport {
            accepted: true,
            failed_check: None,
            query_count: 0,
            random_bits_used: 0,
        };
        n
    ];
    for pass in 0..cfg.verifier_repetitions {
        let mut sessions: Vec<OracleSession<'_>> = (0..n)
            .map(|i| OracleSession::new(proof, seed::node_pass_seed(seed, i, pass)))
            .collect();
        let outcomes: Vec<PassOutcome> = match cfg.language {
            LanguageId::Nonbipartite => {
                let exchange = NeighborExchange::new(n);
                let states = sessions
                    .iter_mut()
                    .enumerate()
                    .map(|(i, s)| nonbipartite_query_phase(i, inst, s, &exchange, cfg))
                    .collect::<Result<Vec<_>, _>>()?;
                states
                    .iter()
                    .enumerate()
                    .map(|(i, st)| nonbipartite_decide(i, inst, st, &exchange))
                    .collect::<Result<_, _>>()?
            }
            LanguageId::Leader => sessions
                .iter_mut()
                .enumerate()
                .map(|(i, s)| run_leader_verifier(i, inst, s, cfg))
                .collect::<Result<_, _>>()?,
            LanguageId::Span => sessions
                .iter_mut()
                .enumerate()
                .map(|(i, s)| run_span_verifier(i, inst, s, cfg))
                .collect::<Result<_, _>>()?,
        };
        for ((report, outcome), session) in nodes.iter_mut().zip(outcomes).zip(&sessions) {
            if report.accepted && outcome.failed.is_some() {
                report.accepted = false;
                report.failed_check = outcome.failed;
            }
            report.query_count += session.query_count();
            report.random_bits_used += session.random_bits_used();
        }
    }
    Ok(RunReport {
        nodes,
        proof_bits: proof.total_bits(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2core::{hadamard_encode, BitVec, ProofTable};
    use crate::graphmodel::{complete_graph, cycle_graph, path_graph, Graph};
    use crate::prover::{canonical_proof, honest_proof};

    fn inst(g: Graph, xs: &[&str]) -> Instance {
        Instance::new(g, xs.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn single(alpha: &str) -> MultiProof {
        MultiProof::single(hadamard_encode(&alpha.parse().unwrap()).unwrap())
    }

    #[test]
    fn nonbipartite_honest_counts() {
        let c5 = Instance::bare(cycle_graph(5).unwrap());
        let proof = honest_proof(&c5, LanguageId::Nonbipartite).unwrap();
        let cfg = ProtocolConfig::new(LanguageId::Nonbipartite);
        for seed in 0..50 {
            let r = run_protocol(&c5, &proof, &cfg, seed).unwrap();
            assert!(r.accepted());
            for node in &r.nodes {
                assert_eq!((node.query_count, node.random_bits_used), (7, 20));
            }
        }
    }

    #[test]
    fn even_weight_fails_parity_everywhere() {
        let c4 = Instance::bare(cycle_graph(4).unwrap());
        let proof = single("1111");
        let r = run_protocol(&c4, &proof, &ProtocolConfig::new(LanguageId::Nonbipartite), 3).unwrap();
        assert!(r.nodes.iter().all(|n| n.failed_check == Some(CheckId::Parity)));
    }

    #[test]
    fn zero_leaders_rejected_for_every_linear_proof() {
        let p3 = inst(path_graph(3).unwrap(), &["0", "0", "0"]);
        let cfg = ProtocolConfig::new(LanguageId::Leader);
        for a in 0..8 {
            let proof = MultiProof::single(hadamard_encode(&BitVec::from_index(3, a)).unwrap());
            for seed in 0..20 {
                assert!(!run_protocol(&p3, &proof, &cfg, seed).unwrap().accepted(), "alpha {a}");
            }
        }
    }

    #[test]
    fn leader_honest_and_two_leaders() {
        let cfg = ProtocolConfig::new(LanguageId::Leader);
        let yes = inst(path_graph(3).unwrap(), &["0", "1", "0"]);
        let proof = honest_proof(&yes, LanguageId::Leader).unwrap();
        assert!((0..50).all(|s| run_protocol(&yes, &proof, &cfg, s).unwrap().accepted()));
        let two = inst(path_graph(3).unwrap(), &["1", "0", "1"]);
        let proof = single("101");
        let runs: Vec<_> = (0..2000).map(|s| run_protocol(&two, &proof, &cfg, s).unwrap()).collect();
        // Even weight: the non-leader's parity check always fails.
        assert!(runs.iter().all(|r| r.nodes[1].failed_check == Some(CheckId::Parity)));
        for leader in [0, 2] {
            let rejected = runs.iter().filter(|r| !r.nodes[leader].accepted).count();
            assert!((850..1150).contains(&rejected), "leader {leader}: {rejected}");
            assert!(runs
                .iter()
                .filter(|r| !r.nodes[leader].accepted)
                .all(|r| r.nodes[leader].failed_check == Some(CheckId::Punctured)));
        }
    }

    #[test]
    fn span_budgets_and_completeness() {
        let k3 = inst(complete_graph(3).unwrap(), &["root", "0", "1"]);
        let proof = honest_proof(&k3, LanguageId::Span).unwrap();
        let cfg = ProtocolConfig::new(LanguageId::Span);
        for seed in 0..50 {
            let r = run_protocol(&k3, &proof, &cfg, seed).unwrap();
            assert!(r.accepted());
            assert_eq!(r.nodes[0].query_count, 7);
            assert_eq!(r.nodes[1].query_count, 21);
            assert!(r.nodes.iter().all(|node| node.random_bits_used == 12));
            assert_eq!(r.max_queries(), cfg.queries_per_pass());
            assert_eq!(r.max_random_bits(), cfg.random_bits_per_pass(3));
        }
    }

    #[test]
    fn span_duplicated_part_fails_unit_check() {
        let p3 = inst(path_graph(3).unwrap(), &["root", "0", "1"]);
        let honest = honest_proof(&p3, LanguageId::Span).unwrap();
        let mut parts = honest.into_parts();
        parts[2] = parts[1].clone();
        let proof = MultiProof::new(parts).unwrap();
        for seed in 0..20 {
            let r = run_protocol(&p3, &proof, &ProtocolConfig::new(LanguageId::Span), seed).unwrap();
            assert_eq!(r.nodes[1].failed_check, Some(CheckId::TreeUnit));
        }
    }

    #[test]
    fn span_parent_cycle_fails_leader_subprotocol() {
        let k3 = inst(complete_graph(3).unwrap(), &["1", "2", "0"]);
        let proof = canonical_proof(&k3, LanguageId::Span).unwrap();
        let r = run_protocol(&k3, &proof, &ProtocolConfig::new(LanguageId::Span), 0).unwrap();
        assert!(r.nodes.iter().all(|n| n.failed_check == Some(CheckId::Parity)));
    }

    #[test]
    fn span_syntax_check_rejects_non_neighbors() {
        let p3 = inst(path_graph(3).unwrap(), &["root", "0", "0"]);
        let proof = canonical_proof(&p3, LanguageId::Span).unwrap();
        let r = run_protocol(&p3, &proof, &ProtocolConfig::new(LanguageId::Span), 0).unwrap();
        assert_eq!(r.nodes[2].failed_check, Some(CheckId::ParentSyntax));
        assert_eq!(r.nodes[2].query_count, 7);
        assert!(r.nodes[1].accepted);
    }

    #[test]
    fn runs_are_deterministic_and_shapes_checked() {
        let c5 = Instance::bare(cycle_graph(5).unwrap());
        let proof = MultiProof::single(ProofTable::from_fn(5, |k| k % 3 == 0).unwrap());
        let cfg = ProtocolConfig::new(LanguageId::Nonbipartite).with_verifier_repetitions(3);
        let a = run_protocol(&c5, &proof, &cfg, 11).unwrap();
        assert_eq!(a, run_protocol(&c5, &proof, &cfg, 11).unwrap());
        assert_eq!(a.max_queries(), 21);
        let wrong = single("111");
        assert!(matches!(run_protocol(&c5, &wrong, &cfg, 0), Err(ProtocolError::Shape { .. })));
        let zero = cfg.with_blr_repetitions(0);
        assert_eq!(run_protocol(&c5, &proof, &zero, 0), Err(ProtocolError::ZeroRepetitions));
    }

    #[test]
    fn decide_without_publications_is_an_error() {
        let c3 = Instance::bare(cycle_graph(3).unwrap());
        let state = NonbipartiteState {
            blr_ok: true,
            a: true,
            parity_ok: true,
        };
        let empty = NeighborExchange::new(3);
        assert_eq!(
            nonbipartite_decide(0, &c3, &state, &empty),
            Err(ProtocolError::MissingPublication(1))
        );
    }

    #[test]
    fn leader_inputs_must_be_bits() {
        let bad = inst(path_graph(2).unwrap(), &["1", "2"]);
        let proof = single("10");
        assert!(matches!(
            run_protocol(&bad, &proof, &ProtocolConfig::new(LanguageId::Leader), 0),
            Err(ProtocolError::Input(_))
        ));
    }
}
