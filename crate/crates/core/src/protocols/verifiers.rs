use super::{CheckId, NeighborExchange, ProtocolConfig, ProtocolError};
use crate::gf2core::{puncture, OracleSession};
use crate::graphmodel::{Instance, SpanInput};

/// Verdict of one node in one pass. Every check runs; the first failure is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PassOutcome {
    pub failed: Option<CheckId>,
}

impl PassOutcome {
    pub fn accepted(&self) -> bool {
        self.failed.is_none()
    }
}

fn note(failed: &mut Option<CheckId>, ok: bool, id: CheckId) {
    if !ok && failed.is_none() {
        *failed = Some(id);
    }
}

fn all_ones(n: usize) -> usize {
    (1usize << n) - 1
}

/// What a Nonbipartite node learns from its own queries before the exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonbipartiteState {
    pub blr_ok: bool,
    /// Self-corrected `α·e_i`, also published to the neighbors.
    pub a: bool,
    pub parity_ok: bool,
}

/// Steps 1, 2 and 4 of the Nonbipartite verifier, publishing `a_i`.
pub fn nonbipartite_query_phase(
    node: usize,
    inst: &Instance,
    session: &mut OracleSession<'_>,
    exchange: &NeighborExchange,
    cfg: &ProtocolConfig,
) -> Result<NonbipartiteState, ProtocolError> {
    let n = inst.n();
    let blr_ok = session.blr_linearity_test(0, cfg.blr_repetitions)?;
    let a = session.self_corrected_query_at(0, 1 << node)?;
    exchange.publish(node, a)?;
    let parity_ok = session.self_corrected_query_at(0, all_ones(n))?;
    Ok(NonbipartiteState { blr_ok, a, parity_ok })
}

/// Step 3 of the Nonbipartite verifier and the final verdict. A node with
/// `a_i = 1` needs exactly two neighbors `j ≠ i` that published one.
pub fn nonbipartite_decide(
    node: usize,
    inst: &Instance,
    state: &NonbipartiteState,
    exchange: &NeighborExchange,
) -> Result<PassOutcome, ProtocolError> {
    let mut failed = None;
    note(&mut failed, state.blr_ok, CheckId::Blr);
    if state.a {
        let mut ones = 0;
        for &j in inst.graph().neighbors(node) {
            ones += usize::from(exchange.read(j)?);
        }
        note(&mut failed, ones == 2, CheckId::Neighbors);
    }
    note(&mut failed, state.parity_ok, CheckId::Parity);
    Ok(PassOutcome { failed })
}

/// The Leader checks on part 0 for node `i`: linearity, `α·e_i = leader`,
/// then `α·r_i = 0` for leaders or `α·𝟙 = 1` otherwise.
///
/// The linearity test shares its points with `extra_parts`. The punctured
/// point `r_i` is the correction coin `s` of the `e_i` read with coordinate
/// `i` cleared. Returns the BLR verdicts of the extra parts and the two
/// correction coins `(s, t)`, so the pass draws `(2k + 2)n` bits in all.
struct LeaderPass {
    failed: Option<CheckId>,
    extra_blr_ok: bool,
    s: usize,
    t: usize,
}

fn leader_checks(
    node: usize,
    leader: bool,
    extra_parts: &[usize],
    session: &mut OracleSession<'_>,
    cfg: &ProtocolConfig,
) -> Result<LeaderPass, ProtocolError> {
    let n = session.dim();
    let mut failed = None;
    let parts: Vec<usize> = std::iter::once(0).chain(extra_parts.iter().copied()).collect();
    let blr = session.blr_linearity_test_joint(&parts, cfg.blr_repetitions)?;
    note(&mut failed, blr[0], CheckId::Blr);
    let (a, s) = session.self_corrected_with_coin(0, 1 << node)?;
    note(&mut failed, a == leader, CheckId::Input);
    let t = if leader {
        let (b, t) = session.self_corrected_with_coin(0, puncture(s, node))?;
        note(&mut failed, !b, CheckId::Punctured);
        t
    } else {
        let (b, t) = session.self_corrected_with_coin(0, all_ones(n))?;
        note(&mut failed, b, CheckId::Parity);
        t
    };
    Ok(LeaderPass {
        failed,
        extra_blr_ok: blr[1..].iter().all(|&ok| ok),
        s,
        t,
    })
}

pub fn run_leader_verifier(
    node: usize,
    inst: &Instance,
    session: &mut OracleSession<'_>,
    cfg: &ProtocolConfig,
) -> Result<PassOutcome, ProtocolError> {
    let leader = inst.input_bit(node)?;
    Ok(PassOutcome {
        failed: leader_checks(node, leader, &[], session, cfg)?.failed,
    })
}

/// Span verifier: the Leader checks on part 0 with the root marker as the
/// leader bit, the syntactic parent check, and for non-root nodes the
/// linearity, unit and punctured checks on parts `1+i` and `1+x(i)`.
///
/// The tree checks reuse the Leader pass's coins: the same BLR points, `s`
/// to correct the `e_i` reads and `t` to correct the `r_i` reads.
pub fn run_span_verifier(
    node: usize,
    inst: &Instance,
    session: &mut OracleSession<'_>,
    cfg: &ProtocolConfig,
) -> Result<PassOutcome, ProtocolError> {
    let parsed = SpanInput::parse(inst.input(node));
    let parent = match parsed {
        SpanInput::Parent(j) if j != node && inst.graph().has_edge(node, j) => Some(j),
        _ => None,
    };
    let tree_parts: Vec<usize> = parent.map(|p| vec![1 + node, 1 + p]).unwrap_or_default();
    let pass = leader_checks(node, parsed == SpanInput::Root, &tree_parts, session, cfg)?;
    let mut failed = pass.failed;
    if parsed != SpanInput::Root && parent.is_none() {
        note(&mut failed, false, CheckId::ParentSyntax);
    }
    if let Some(p) = parent {
        let (own, up, e) = (1 + node, 1 + p, 1 << node);
        note(&mut failed, pass.extra_blr_ok, CheckId::TreeBlr);
        let u1 = session.corrected_read(own, e, pass.s)?;
        let u2 = session.corrected_read(up, e, pass.s)?;
        note(&mut failed, u1 ^ u2, CheckId::TreeUnit);
        let r = puncture(pass.s, node);
        let v1 = session.corrected_read(own, r, pass.t)?;
        let v2 = session.corrected_read(up, r, pass.t)?;
        note(&mut failed, !(v1 ^ v2), CheckId::TreePunctured);
    }
    Ok(PassOutcome { failed })
}
