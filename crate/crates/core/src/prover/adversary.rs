//! Cheating proof strategies. Every strategy works on the flat bit string of
//! the proof (part after part), so each applies to every language.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonical_alphas, encode_alphas, part_count, span_alphas, ProverError};
use crate::gf2core::{hadamard_encode, BitVec, MultiProof, ProofTable};
use crate::graphmodel::{find_odd_cycle, is_member, parent_map, Instance, LanguageId, SpanInput};

/// Largest proof that `exhaustive` may index.
pub const EXHAUSTIVE_MAX_BITS: u64 = 32;

/// Which non-witness a `wrong-witness` strategy encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSpec {
    /// The canonical encoding on no-instances; a derived non-witness on yes-instances.
    Auto,
    /// `Had` of the indicator of a vertex set (single-part languages).
    Set(Vec<usize>),
    /// `Had(α)` for an explicit vector (single-part languages).
    Alpha(BitVec),
    /// The Span encoding of an explicit parent map.
    Parents(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdversaryStrategy {
    UniformRandom,
    CorruptFlips(u64),
    CorruptFraction(f64),
    WrongWitness(WitnessSpec),
    Constant(bool),
    /// `Had(alpha)` in every part with `flips` random flat bits flipped.
    Planted { alpha: BitVec, flips: u64 },
    /// The proof whose flat bit `g` is bit `g` of the index.
    Exhaustive(u64),
}

fn strategy_err(msg: impl Into<String>) -> ProverError {
    ProverError::Strategy(msg.into())
}

fn random_table(dim: usize, rng: &mut ChaCha8Rng) -> Result<ProofTable, ProverError> {
    let words = (0..(1usize << dim).div_ceil(64)).map(|_| rng.next_u64()).collect();
    Ok(ProofTable::from_words(dim, words)?)
}

fn flip_random(proof: &mut MultiProof, count: u64, rng: &mut ChaCha8Rng) -> Result<(), ProverError> {
    let total = proof.total_bits();
    if count > total {
        return Err(strategy_err(format!("cannot flip {count} of {total} proof bits")));
    }
    for g in sample(rng, total as usize, count as usize) {
        proof.flat_flip(g as u64);
    }
    Ok(())
}

/// A non-witness derived from the honest one on a yes-instance.
fn derived_non_witness(inst: &Instance, language: LanguageId) -> Result<Vec<BitVec>, ProverError> {
    let n = inst.n();
    match language {
        LanguageId::Nonbipartite => {
            // Drop the largest cycle vertex: an even set.
            let mut cycle = find_odd_cycle(inst.graph()).expect("yes-instance has an odd cycle");
            cycle.pop();
            Ok(vec![BitVec::indicator(n, &cycle)?])
        }
        LanguageId::Leader => {
            let mut alpha = canonical_alphas(inst, language)?.remove(0);
            let extra = (0..n)
                .find(|&i| !alpha.get(i))
                .ok_or_else(|| strategy_err("a single vertex cannot host a second leader"))?;
            alpha.set(extra, true);
            Ok(vec![alpha])
        }
        LanguageId::Span => {
            let parents = parent_map(inst);
            let mut inputs = inst.inputs().to_vec();
            let child_of = |u: usize| (0..n).find(|&c| parents[c] == SpanInput::Parent(u));
            // Prefer a two-cycle between a non-root vertex and its child.
            let inner = (0..n).find_map(|u| match parents[u] {
                SpanInput::Parent(_) => child_of(u).map(|c| (u, c)),
                _ => None,
            });
            let (u, c) = match inner {
                Some(pair) => pair,
                None => {
                    let root = parents.iter().position(|p| *p == SpanInput::Root).expect("valid tree");
                    let c = child_of(root).ok_or_else(|| strategy_err("a single vertex has no parent pointers"))?;
                    (root, c)
                }
            };
            inputs[u] = c.to_string();
            span_alphas(&inst.with_inputs(inputs)?)
        }
    }
}

fn witness_alphas(inst: &Instance, language: LanguageId, spec: &WitnessSpec) -> Result<Vec<BitVec>, ProverError> {
    let n = inst.n();
    match (spec, language) {
        (WitnessSpec::Auto, _) => {
            if is_member(inst, language)? {
                derived_non_witness(inst, language)
            } else {
                canonical_alphas(inst, language)
            }
        }
        (WitnessSpec::Set(_) | WitnessSpec::Alpha(_), LanguageId::Span) => {
            Err(strategy_err("span proofs take a parent map: use parents=..."))
        }
        (WitnessSpec::Set(set), _) => Ok(vec![BitVec::indicator(n, set)
            .map_err(|_| strategy_err(format!("vertex set {set:?} out of range for {n} vertices")))?]),
        (WitnessSpec::Alpha(alpha), _) => {
            if alpha.len() != n {
                return Err(strategy_err(format!("alpha has {} coordinates, expected {n}", alpha.len())));
            }
            Ok(vec![alpha.clone()])
        }
        (WitnessSpec::Parents(inputs), LanguageId::Span) => {
            let modified = inst
                .with_inputs(inputs.clone())
                .map_err(|e| strategy_err(format!("parent map: {e}")))?;
            span_alphas(&modified)
        }
        (WitnessSpec::Parents(_), _) => Err(strategy_err("parents=... applies to span only")),
    }
}

/// Build the proof `strategy` commits to; deterministic per `(inst, strategy, seed)`.
pub fn adversarial_proof(
    inst: &Instance,
    language: LanguageId,
    strategy: &AdversaryStrategy,
    seed: u64,
) -> Result<MultiProof, ProverError> {
    let n = inst.n();
    let parts = part_count(language, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match strategy {
        AdversaryStrategy::UniformRandom => {
            let tables = (0..parts).map(|_| random_table(n, &mut rng)).collect::<Result<Vec<_>, _>>()?;
            Ok(MultiProof::new(tables)?)
        }
        AdversaryStrategy::CorruptFlips(k) => {
            let mut proof = encode_alphas(&canonical_alphas(inst, language)?)?;
            flip_random(&mut proof, *k, &mut rng)?;
            Ok(proof)
        }
        AdversaryStrategy::CorruptFraction(f) => {
            if !(0.0..=1.0).contains(f) {
                return Err(strategy_err(format!("flip fraction {f} outside [0, 1]")));
            }
            let mut proof = encode_alphas(&canonical_alphas(inst, language)?)?;
            let k = (f * proof.total_bits() as f64).round() as u64;
            flip_random(&mut proof, k, &mut rng)?;
            Ok(proof)
        }
        AdversaryStrategy::WrongWitness(spec) => encode_alphas(&witness_alphas(inst, language, spec)?),
        AdversaryStrategy::Constant(b) => {
            let tables = (0..parts).map(|_| ProofTable::constant(n, *b)).collect::<Result<Vec<_>, _>>()?;
            Ok(MultiProof::new(tables)?)
        }
        AdversaryStrategy::Planted { alpha, flips } => {
            if alpha.len() != n {
                return Err(strategy_err(format!("alpha has {} coordinates, expected {n}", alpha.len())));
            }
            let table = hadamard_encode(alpha)?;
            let mut proof = MultiProof::new(vec![table; parts])?;
            flip_random(&mut proof, *flips, &mut rng)?;
            Ok(proof)
        }
        AdversaryStrategy::Exhaustive(k) => {
            let total = parts as u64 * (1u64 << n.min(63));
            if n >= 6 || total > EXHAUSTIVE_MAX_BITS {
                return Err(strategy_err(format!(
                    "exhaustive enumeration needs at most {EXHAUSTIVE_MAX_BITS} proof bits, this proof has {parts}x2^{n}"
                )));
            }
            if *k >> total != 0 {
                return Err(strategy_err(format!("index {k} exceeds the 2^{total} proofs")));
            }
            Ok(MultiProof::from_flat_fn(n, parts, |g| (k >> g) & 1 == 1)?)
        }
    }
}

/// Number of proofs the exhaustive strategy ranges over, if enumerable.
pub fn exhaustive_space(language: LanguageId, n: usize) -> Option<u64> {
    let total = part_count(language, n) as u64 * (1u64 << n.min(63));
    (n < 6 && total <= EXHAUSTIVE_MAX_BITS).then(|| 1u64 << total)
}

impl fmt::Display for WitnessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSpec::Auto => Ok(()),
            WitnessSpec::Set(s) => {
                let items: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, ":set={}", items.join(","))
            }
            WitnessSpec::Alpha(a) => write!(f, ":alpha={a}"),
            WitnessSpec::Parents(p) => write!(f, ":parents={}", p.join("/")),
        }
    }
}

impl fmt::Display for AdversaryStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryStrategy::UniformRandom => f.write_str("uniform-random"),
            AdversaryStrategy::CorruptFlips(k) => write!(f, "corrupt:flips={k}"),
            AdversaryStrategy::CorruptFraction(x) => write!(f, "corrupt:frac={x}"),
            AdversaryStrategy::WrongWitness(w) => write!(f, "wrong-witness{w}"),
            AdversaryStrategy::Constant(b) => write!(f, "constant:{}", u8::from(*b)),
            AdversaryStrategy::Planted { alpha, flips } => write!(f, "planted:alpha={alpha}:flips={flips}"),
            AdversaryStrategy::Exhaustive(k) => write!(f, "exhaustive:{k}"),
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T, ProverError> {
    s.parse().map_err(|_| strategy_err(format!("invalid {what} {s:?}")))
}

fn parse_alpha(s: &str) -> Result<BitVec, ProverError> {
    if s.is_empty() {
        return Err(strategy_err("alpha must not be empty"));
    }
    s.parse().map_err(|_| strategy_err(format!("alpha {s:?} is not a 0/1 string")))
}

impl FromStr for AdversaryStrategy {
    type Err = ProverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let kv = |field: &str, key: &str| -> Option<String> { field.strip_prefix(key).map(str::to_string) };
        let strategy = match name {
            "uniform-random" | "random" if rest.is_empty() => AdversaryStrategy::UniformRandom,
            "corrupt" => {
                if let Some(k) = kv(rest, "flips=") {
                    AdversaryStrategy::CorruptFlips(parse_num(&k, "flip count")?)
                } else if let Some(x) = kv(rest, "frac=") {
                    let x: f64 = parse_num(&x, "flip fraction")?;
                    if !(0.0..=1.0).contains(&x) {
                        return Err(strategy_err(format!("flip fraction {x} outside [0, 1]")));
                    }
                    AdversaryStrategy::CorruptFraction(x)
                } else {
                    return Err(strategy_err("corrupt needs flips=K or frac=F"));
                }
            }
            "wrong-witness" => AdversaryStrategy::WrongWitness(if rest.is_empty() {
                WitnessSpec::Auto
            } else if let Some(set) = kv(rest, "set=") {
                let items = set
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| parse_num(t, "vertex id"))
                    .collect::<Result<Vec<usize>, _>>()?;
                WitnessSpec::Set(items)
            } else if let Some(a) = kv(rest, "alpha=") {
                WitnessSpec::Alpha(parse_alpha(&a)?)
            } else if let Some(p) = kv(rest, "parents=") {
                WitnessSpec::Parents(p.split('/').map(str::to_string).collect())
            } else {
                return Err(strategy_err(format!("unknown witness descriptor {rest:?}")));
            }),
            "constant" => match rest {
                "0" => AdversaryStrategy::Constant(false),
                "1" => AdversaryStrategy::Constant(true),
                _ => return Err(strategy_err("constant needs 0 or 1")),
            },
            "planted" => {
                let (a, f) = rest
                    .split_once(':')
                    .ok_or_else(|| strategy_err("planted needs alpha=...:flips=K"))?;
                let alpha = kv(a, "alpha=").ok_or_else(|| strategy_err("planted needs alpha=..."))?;
                let flips = kv(f, "flips=").ok_or_else(|| strategy_err("planted needs flips=K"))?;
                AdversaryStrategy::Planted {
                    alpha: parse_alpha(&alpha)?,
                    flips: parse_num(&flips, "flip count")?,
                }
            }
            "exhaustive" => AdversaryStrategy::Exhaustive(parse_num(rest, "proof index")?),
            _ => return Err(strategy_err(format!("unknown adversary {s:?}"))),
        };
        Ok(strategy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::{cycle_graph, path_graph};
    use std::collections::HashSet;

    fn inst(g: crate::graphmodel::Graph, xs: &[&str]) -> Instance {
        Instance::new(g, xs.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn descriptors_round_trip() {
        for s in [
            "uniform-random",
            "corrupt:flips=3",
            "corrupt:frac=0.25",
            "wrong-witness",
            "wrong-witness:set=0,1,2,3",
            "wrong-witness:alpha=101",
            "wrong-witness:parents=root/0/1",
            "constant:1",
            "planted:alpha=110:flips=2",
            "exhaustive:17",
        ] {
            assert_eq!(s.parse::<AdversaryStrategy>().unwrap().to_string(), s);
        }
        for bad in ["corrupt:frac=1.5", "constant:2", "wrong-witness:foo=1", "planted:alpha=1x:flips=1", "nope"] {
            assert!(bad.parse::<AdversaryStrategy>().is_err(), "{bad}");
        }
    }

    #[test]
    fn even_cycle_wrong_witness_is_all_ones() {
        let c4 = Instance::bare(cycle_graph(4).unwrap());
        let s: AdversaryStrategy = "wrong-witness:set=0,1,2,3".parse().unwrap();
        let p = adversarial_proof(&c4, LanguageId::Nonbipartite, &s, 0).unwrap();
        assert_eq!(p.parts()[0], hadamard_encode(&BitVec::ones(4)).unwrap());
        let auto = adversarial_proof(&c4, LanguageId::Nonbipartite, &AdversaryStrategy::WrongWitness(WitnessSpec::Auto), 0);
        assert_eq!(auto.unwrap(), p);
    }

    #[test]
    fn auto_wrong_witness_on_yes_instances() {
        let ww = AdversaryStrategy::WrongWitness(WitnessSpec::Auto);
        let c5 = Instance::bare(cycle_graph(5).unwrap());
        let p = adversarial_proof(&c5, LanguageId::Nonbipartite, &ww, 0).unwrap();
        assert_eq!(p.parts()[0], hadamard_encode(&"11110".parse().unwrap()).unwrap());
        let p3 = inst(path_graph(3).unwrap(), &["0", "1", "0"]);
        let p = adversarial_proof(&p3, LanguageId::Leader, &ww, 0).unwrap();
        assert_eq!(p.parts()[0], hadamard_encode(&"110".parse().unwrap()).unwrap());
        let tree = inst(path_graph(3).unwrap(), &["root", "0", "1"]);
        let p = adversarial_proof(&tree, LanguageId::Span, &ww, 0).unwrap();
        // Vertex 1 now points at its child 2: no vertex reaches the root except 0.
        assert_eq!(p.part_count(), 4);
        assert_eq!(p.parts()[2], hadamard_encode(&"011".parse().unwrap()).unwrap());
    }

    #[test]
    fn constant_and_exhaustive() {
        let p3 = inst(path_graph(3).unwrap(), &["0", "1", "0"]);
        let zero = adversarial_proof(&p3, LanguageId::Leader, &AdversaryStrategy::Constant(false), 0).unwrap();
        assert_eq!(zero.parts()[0].ones(), 0);
        let all: HashSet<MultiProof> = (0..256)
            .map(|k| adversarial_proof(&p3, LanguageId::Leader, &AdversaryStrategy::Exhaustive(k), 0).unwrap())
            .collect();
        assert_eq!(all.len(), 256);
        assert!(adversarial_proof(&p3, LanguageId::Leader, &AdversaryStrategy::Exhaustive(256), 0).is_err());
        let c6 = Instance::bare(cycle_graph(6).unwrap());
        assert!(adversarial_proof(&c6, LanguageId::Nonbipartite, &AdversaryStrategy::Exhaustive(0), 0).is_err());
        assert_eq!(exhaustive_space(LanguageId::Leader, 3), Some(256));
        assert_eq!(exhaustive_space(LanguageId::Span, 2), Some(1 << 12));
        assert_eq!(exhaustive_space(LanguageId::Span, 3), Some(1 << 32));
        assert_eq!(exhaustive_space(LanguageId::Span, 4), None);
    }

    #[test]
    fn corruption_flips_exact_count_deterministically() {
        let c5 = Instance::bare(cycle_graph(5).unwrap());
        let honest = crate::prover::honest_proof_nonbipartite(&c5).unwrap();
        let s = AdversaryStrategy::CorruptFlips(4);
        let a = adversarial_proof(&c5, LanguageId::Nonbipartite, &s, 9).unwrap();
        let b = adversarial_proof(&c5, LanguageId::Nonbipartite, &s, 9).unwrap();
        assert_eq!(a, b);
        let diff = (0..32).filter(|&g| a.flat_get(g) != honest.flat_get(g)).count();
        assert_eq!(diff, 4);
        assert!(adversarial_proof(&c5, LanguageId::Nonbipartite, &AdversaryStrategy::CorruptFlips(33), 0).is_err());
    }

    #[test]
    fn shape_follows_language() {
        let tree = inst(path_graph(3).unwrap(), &["root", "0", "1"]);
        let p = adversarial_proof(&tree, LanguageId::Span, &AdversaryStrategy::UniformRandom, 1).unwrap();
        assert_eq!((p.part_count(), p.dim()), (4, 3));
        let bad = AdversaryStrategy::WrongWitness(WitnessSpec::Set(vec![0]));
        assert!(adversarial_proof(&tree, LanguageId::Span, &bad, 0).is_err());
    }
}
