//! Exact acceptance probabilities.
//!
//! Draws of different nodes and different passes are independent, so the
//! probability factors into per-node terms. The only coupling is the
//! Nonbipartite exchange, handled by summing over the published tuple
//! `(a_0, ..., a_{n-1})`. Within a node, the correction coin of the `e_i`
//! read also fixes the punctured point, so those two reads are summed jointly,
//! and a Span node's checks share coins, which Walsh transforms untangle.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::HarnessError;
use crate::gf2core::{blr_pass_probability, fwht, puncture, self_corrected_ones_all, MultiProof, ProofTable};
use crate::graphmodel::{Instance, LanguageId, SpanInput};
use crate::protocols::{check_shape, ProtocolConfig};
use crate::Prob;

/// Cap on `n · 2^n`, the number of coin groups the exact backend sums over.
pub const EXACT_BUDGET: u64 = 1 << 24;

pub fn exact_cost(n: usize) -> u64 {
    if n >= 40 {
        return u64::MAX;
    }
    n as u64 * (1u64 << n)
}

pub fn exact_feasible(n: usize) -> bool {
    exact_cost(n) <= EXACT_BUDGET
}

fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Prob {
    BigRational::new(num.into(), den.into())
}

/// Per-table quantities shared by every node reading the table.
struct TableStats {
    blr_pass: Prob,
    /// `ones[p]`: correction coins for which the read at `p` returns one.
    ones: Vec<u64>,
}

impl TableStats {
    fn new(t: &ProofTable, blr_repetitions: u32) -> Self {
        TableStats {
            blr_pass: num_traits::pow(blr_pass_probability(t), blr_repetitions as usize),
            ones: self_corrected_ones_all(t),
        }
    }
}

fn size(n: usize) -> u64 {
    1u64 << n
}

/// Probability that the Leader checks on one table pass for node `i`.
fn leader_term(stats: &TableStats, table: &ProofTable, n: usize, i: usize, leader: bool) -> Prob {
    let big_n = size(n);
    let e = 1usize << i;
    let checks = if leader {
        // Sum over the e_i coin s; the punctured point is s with bit i cleared.
        let total: u128 = (0..table.len())
            .filter(|&s| table.get(e ^ s) ^ table.get(s))
            .map(|s| u128::from(big_n - stats.ones[puncture(s, i)]))
            .sum();
        frac(total, u128::from(big_n) * u128::from(big_n))
    } else {
        let zero = big_n - stats.ones[e];
        let par = stats.ones[table.len() - 1];
        frac(u128::from(zero) * u128::from(par), u128::from(big_n) * u128::from(big_n))
    };
    &stats.blr_pass * checks
}

/// `(-1)^{f(x)}` for every `x`.
fn signs(t: &ProofTable) -> Vec<i64> {
    t.iter().map(|b| if b { -1 } else { 1 }).collect()
}

fn times(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn walsh(signs: &[i64]) -> Vec<i64> {
    let mut w = signs.to_vec();
    fwht(&mut w);
    w
}

/// `Σ_α W(α)^3`, which counts BLR-passing pairs of a sign table.
fn cube_sum(signs: &[i64]) -> i128 {
    walsh(signs).iter().map(|&w| i128::from(w).pow(3)).sum()
}

/// Node term of a Span node with a valid parent. One BLR pair per
/// repetition is checked on the root table `T0`, the node's table and the
/// parent's. The coin `s` corrects the three `e_i` reads and `t` corrects the
/// parity read of `T0` and both `r_i` reads, with `r_i` the puncture of `s`.
///
/// With `F`, `G` the sign tables of `T0` and `U = T_i ⊕ T_p`:
/// - all three BLR checks pass on `(N^3 + Σ_S Σ W_S^3) / 8N^3` of the pairs,
///   `S` ranging over the non-empty products of the three sign tables;
/// - for fixed `s` the count of good `t` is
///   `(N - A_F(𝟙) + A_G(r) - X(r)) / 4`, with `A` autocorrelations and
///   `X(r) = Σ_t F(t)F(t⊕𝟙)G(t)G(t⊕r)` a cross-correlation, all through
///   Walsh transforms.
fn tree_node_term(t0: &ProofTable, own: &ProofTable, up: &ProofTable, n: usize, i: usize, k: u32) -> Prob {
    let big_n = size(n) as i64;
    let f = signs(t0);
    let (gi, gp) = (signs(own), signs(up));
    let g = times(&gi, &gp);
    let cubes: i128 = [
        f.clone(),
        gi.clone(),
        gp.clone(),
        times(&f, &gi),
        times(&f, &gp),
        g.clone(),
        times(&f, &g),
    ]
    .iter()
    .map(|v| cube_sum(v))
    .sum();
    let n3 = i128::from(big_n).pow(3);
    let blr = num_traits::pow(frac(n3 + cubes, 8 * n3), k as usize);
    if blr.is_zero() {
        return blr;
    }

    let all = t0.len() - 1;
    let w_g = walsh(&g);
    let mut auto_g: Vec<i64> = w_g.iter().map(|w| w * w).collect();
    fwht(&mut auto_g);
    let h: Vec<i64> = (0..t0.len()).map(|x| f[x] * f[x ^ all] * g[x]).collect();
    let mut cross: Vec<i64> = walsh(&h).iter().zip(&w_g).map(|(a, b)| a * b).collect();
    fwht(&mut cross);
    let auto_f_all: i64 = (0..t0.len()).map(|x| f[x] * f[x ^ all]).sum();

    let e = 1usize << i;
    let mut total: i128 = 0;
    for s in 0..t0.len() {
        let input_ok = t0.get(e ^ s) == t0.get(s);
        let unit_ok = (own.get(e ^ s) ^ own.get(s)) != (up.get(e ^ s) ^ up.get(s));
        if input_ok && unit_ok {
            let r = puncture(s, i);
            let four = big_n - auto_f_all + auto_g[r] / big_n - cross[r] / big_n;
            debug_assert!(four % 4 == 0 && four >= 0);
            total += i128::from(four / 4);
        }
    }
    blr * frac(total, i128::from(big_n).pow(2))
}

fn nonbipartite_pass(inst: &Instance, proof: &MultiProof, cfg: &ProtocolConfig) -> Prob {
    let n = inst.n();
    let t = &proof.parts()[0];
    let stats = TableStats::new(t, cfg.blr_repetitions);
    let big_n = size(n);
    let local = &stats.blr_pass * frac(stats.ones[t.len() - 1], big_n);
    let local_all = num_traits::pow(local, n);
    if local_all.is_zero() {
        return local_all;
    }
    let one_counts: Vec<u64> = (0..n).map(|i| stats.ones[1 << i]).collect();
    let masks: Vec<u64> = (0..n)
        .map(|i| inst.graph().neighbors(i).iter().fold(0u64, |m, &j| m | 1 << j))
        .collect();
    // Depth-first over a_0, a_1, ...; weights are counts out of 2^n each.
    let mut sum = BigUint::zero();
    let mut stack: Vec<(usize, u64, BigUint)> = vec![(0, 0, BigUint::one())];
    while let Some((i, a, w)) = stack.pop() {
        if i == n {
            let ok = (0..n).all(|v| a >> v & 1 == 0 || (a & masks[v]).count_ones() == 2);
            if ok {
                sum += w;
            }
            continue;
        }
        let ones = one_counts[i];
        if ones > 0 {
            stack.push((i + 1, a | 1 << i, &w * ones));
        }
        if ones < big_n {
            stack.push((i + 1, a, w * (big_n - ones)));
        }
    }
    let den = BigUint::from(big_n).pow(n as u32);
    local_all * BigRational::new(sum.into(), den.into())
}

fn leader_pass(inst: &Instance, proof: &MultiProof, cfg: &ProtocolConfig) -> Result<Prob, HarnessError> {
    let n = inst.n();
    let t = &proof.parts()[0];
    let stats = TableStats::new(t, cfg.blr_repetitions);
    let mut p = Prob::one();
    for i in 0..n {
        p *= leader_term(&stats, t, n, i, inst.input_bit(i)?);
        if p.is_zero() {
            break;
        }
    }
    Ok(p)
}

fn span_pass(inst: &Instance, proof: &MultiProof, cfg: &ProtocolConfig) -> Prob {
    let n = inst.n();
    let parts = proof.parts();
    let root_stats = TableStats::new(&parts[0], cfg.blr_repetitions);
    let mut p = Prob::one();
    for i in 0..n {
        let parsed = SpanInput::parse(inst.input(i));
        match parsed {
            SpanInput::Root => p *= leader_term(&root_stats, &parts[0], n, i, true),
            SpanInput::Parent(j) if j != i && inst.graph().has_edge(i, j) => {
                p *= tree_node_term(&parts[0], &parts[1 + i], &parts[1 + j], n, i, cfg.blr_repetitions);
            }
            _ => return Prob::zero(),
        }
        if p.is_zero() {
            break;
        }
    }
    p
}

/// Exact probability that every node accepts.
pub fn exact_acceptance_probability(
    inst: &Instance,
    proof: &MultiProof,
    cfg: &ProtocolConfig,
) -> Result<Prob, HarnessError> {
    cfg.validate()?;
    check_shape(inst, proof, cfg.language)?;
    let n = inst.n();
    if !exact_feasible(n) {
        return Err(HarnessError::Capacity {
            what: "exact enumeration cost",
            requested: exact_cost(n),
            limit: EXACT_BUDGET,
        });
    }
    let pass = match cfg.language {
        LanguageId::Nonbipartite => nonbipartite_pass(inst, proof, cfg),
        LanguageId::Leader => leader_pass(inst, proof, cfg)?,
        LanguageId::Span => span_pass(inst, proof, cfg),
    };
    Ok(num_traits::pow(pass, cfg.verifier_repetitions as usize))
}
