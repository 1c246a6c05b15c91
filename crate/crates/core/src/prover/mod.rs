//! Honest proofs for each language and adversarial proof strategies.

mod adversary;

pub use adversary::{adversarial_proof, exhaustive_space, AdversaryStrategy, WitnessSpec, EXHAUSTIVE_MAX_BITS};

use crate::gf2core::{hadamard_encode, BitVec, Gf2Error, MultiProof};
use crate::graphmodel::{
    find_odd_cycle, is_member, parent_map, GraphError, Instance, LanguageId, SpanInput,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("no witness: {0}")]
    Witness(String),
    #[error("invalid strategy: {0}")]
    Strategy(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Number of proof parts the protocol for `language` reads on `n` vertices.
pub fn part_count(language: LanguageId, n: usize) -> usize {
    match language {
        LanguageId::Nonbipartite | LanguageId::Leader => 1,
        LanguageId::Span => n + 1,
    }
}

fn encode_all(alphas: &[BitVec]) -> Result<MultiProof, ProverError> {
    let parts = alphas.iter().map(hadamard_encode).collect::<Result<Vec<_>, _>>()?;
    Ok(MultiProof::new(parts)?)
}

pub fn honest_proof_nonbipartite(inst: &Instance) -> Result<MultiProof, ProverError> {
    let cycle = find_odd_cycle(inst.graph()).ok_or_else(|| ProverError::Witness("graph is bipartite".into()))?;
    encode_all(&[BitVec::indicator(inst.n(), &cycle)?])
}

pub fn honest_proof_leader(inst: &Instance) -> Result<MultiProof, ProverError> {
    if !is_member(inst, LanguageId::Leader)? {
        return Err(ProverError::Witness("inputs do not mark exactly one leader".into()));
    }
    encode_all(&canonical_alphas(inst, LanguageId::Leader)?)
}

pub fn honest_proof_span(inst: &Instance) -> Result<MultiProof, ProverError> {
    if !is_member(inst, LanguageId::Span)? {
        return Err(ProverError::Witness("inputs do not form a spanning tree".into()));
    }
    encode_all(&canonical_alphas(inst, LanguageId::Span)?)
}

pub fn honest_proof(inst: &Instance, language: LanguageId) -> Result<MultiProof, ProverError> {
    match language {
        LanguageId::Nonbipartite => honest_proof_nonbipartite(inst),
        LanguageId::Leader => honest_proof_leader(inst),
        LanguageId::Span => honest_proof_span(inst),
    }
}

/// Span vectors for arbitrary inputs: `α_r` marks every vertex whose input
/// is the root marker, and `α_i` marks everything reachable from `i` along
/// parent pointers that parse to an in-range id, `i` included. On a valid
/// tree this is the honest witness.
pub fn span_alphas(inst: &Instance) -> Result<Vec<BitVec>, ProverError> {
    let n = inst.n();
    let parents = parent_map(inst);
    let roots: Vec<usize> = (0..n).filter(|&i| parents[i] == SpanInput::Root).collect();
    let mut alphas = vec![BitVec::indicator(n, &roots)?];
    for i in 0..n {
        let mut a = BitVec::zeros(n);
        let mut v = i;
        while !a.get(v) {
            a.set(v, true);
            match parents[v] {
                SpanInput::Parent(j) if j < n => v = j,
                _ => break,
            }
        }
        alphas.push(a);
    }
    Ok(alphas)
}

/// The vectors the honest prover would encode, extended to every instance.
///
/// Nonbipartite uses a shortest odd cycle, or all vertices on bipartite
/// graphs; Leader uses the input bits; Span uses [`span_alphas`].
pub fn canonical_alphas(inst: &Instance, language: LanguageId) -> Result<Vec<BitVec>, ProverError> {
    let n = inst.n();
    match language {
        LanguageId::Nonbipartite => Ok(vec![match find_odd_cycle(inst.graph()) {
            Some(c) => BitVec::indicator(n, &c)?,
            None => BitVec::ones(n),
        }]),
        LanguageId::Leader => {
            let bits = (0..n).map(|i| inst.input_bit(i)).collect::<Result<Vec<_>, _>>()?;
            Ok(vec![BitVec::from_bits(&bits)])
        }
        LanguageId::Span => span_alphas(inst),
    }
}

pub fn canonical_proof(inst: &Instance, language: LanguageId) -> Result<MultiProof, ProverError> {
    encode_all(&canonical_alphas(inst, language)?)
}

pub(crate) fn encode_alphas(alphas: &[BitVec]) -> Result<MultiProof, ProverError> {
    encode_all(alphas)
}
