//! Deterministic instance generators.
//!
//! Descriptor grammar: `graph[+inputs]` where `graph` is one of
//! `cycle:m`, `path:m`, `complete:m`, `star:m`, `tree:m`,
//! `random-connected:m:p`, and `inputs` is one of `nonbip-yes`, `nonbip-no`,
//! `leader:i`, `leaders:k`, `span`, `span-corrupt:{cycle|two-roots|zero-roots|non-neighbor}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::languages::{is_member, is_nonbipartite, SpanInput};
use super::{Graph, GraphError, Instance, LanguageId, ROOT_MARKER};

#[derive(Clone, Debug, PartialEq)]
pub enum GraphKind {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    Star(usize),
    Tree(usize),
    RandomConnected(usize, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanCorruption {
    Cycle,
    TwoRoots,
    ZeroRoots,
    NonNeighbor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputKind {
    NonbipYes,
    NonbipNo,
    Leader(usize),
    Leaders(usize),
    Span,
    SpanCorrupt(SpanCorruption),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub graph: GraphKind,
    pub inputs: Option<InputKind>,
}

pub fn cycle_graph(m: usize) -> Result<Graph, GraphError> {
    if m < 3 {
        return Err(GraphError::Generation(format!("cycle needs at least 3 vertices, got {m}")));
    }
    let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    Graph::new(m, &edges)
}

pub fn path_graph(m: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
    Graph::new(m, &edges)
}

pub fn complete_graph(m: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect();
    Graph::new(m, &edges)
}

/// Star on `m` vertices with center 0.
pub fn star_graph(m: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..m).map(|v| (0, v)).collect();
    Graph::new(m, &edges)
}

fn pruefer_tree_edges(m: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if m < 2 {
        return Vec::new();
    }
    if m == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..m - 2).map(|_| rng.random_range(0..m)).collect();
    let mut degree = vec![1usize; m];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(m - 1);
    for &s in &seq {
        let leaf = leaves.pop_first().expect("a Pruefer sequence always leaves a leaf");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let u = leaves.pop_first().expect("two leaves remain");
    let v = leaves.pop_first().expect("two leaves remain");
    edges.push((u, v));
    edges
}

fn build_graph(kind: &GraphKind, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    match *kind {
        GraphKind::Cycle(m) => cycle_graph(m),
        GraphKind::Path(m) => path_graph(m),
        GraphKind::Complete(m) => complete_graph(m),
        GraphKind::Star(m) => star_graph(m),
        GraphKind::Tree(m) => Graph::new(m, &pruefer_tree_edges(m, rng)),
        GraphKind::RandomConnected(m, p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::Generation(format!("edge probability {p} outside [0, 1]")));
            }
            let mut edges: BTreeSet<(usize, usize)> = pruefer_tree_edges(m, rng)
                .into_iter()
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            for u in 0..m {
                for v in u + 1..m {
                    if rng.random_bool(p) {
                        edges.insert((u, v));
                    }
                }
            }
            let edges: Vec<_> = edges.into_iter().collect();
            Graph::new(m, &edges)
        }
    }
}

/// Random spanning tree grown from a random root by picking uniformly among
/// frontier edges; returns the parent inputs.
fn random_span_inputs(g: &Graph, rng: &mut ChaCha8Rng) -> Vec<String> {
    let n = g.n();
    let root = rng.random_range(0..n);
    let mut inputs = vec![String::new(); n];
    inputs[root] = ROOT_MARKER.to_string();
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    for _ in 1..n {
        let frontier: Vec<(usize, usize)> = (0..n)
            .filter(|&u| in_tree[u])
            .flat_map(|u| g.neighbors(u).iter().filter(|&&v| !in_tree[v]).map(move |&v| (u, v)))
            .collect();
        let (u, v) = frontier[rng.random_range(0..frontier.len())];
        inputs[v] = u.to_string();
        in_tree[v] = true;
    }
    inputs
}

fn gen_err(msg: impl Into<String>) -> GraphError {
    GraphError::Generation(msg.into())
}

fn corrupt_span(g: &Graph, inputs: &mut [String], how: SpanCorruption, rng: &mut ChaCha8Rng) -> Result<(), GraphError> {
    let n = g.n();
    let parsed: Vec<SpanInput> = inputs.iter().map(|s| SpanInput::parse(s)).collect();
    let root = parsed
        .iter()
        .position(|p| *p == SpanInput::Root)
        .expect("valid tree has a root");
    let non_roots: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    if non_roots.is_empty() {
        return Err(gen_err("a single vertex cannot carry a corrupted spanning tree"));
    }
    match how {
        SpanCorruption::Cycle => {
            // Point a parent back at its child, preferring a parent that is not the root.
            let deep: Vec<usize> = non_roots
                .iter()
                .copied()
                .filter(|&v| matches!(parsed[v], SpanInput::Parent(p) if p != root))
                .collect();
            let pool = if deep.is_empty() { &non_roots } else { &deep };
            let child = pool[rng.random_range(0..pool.len())];
            let SpanInput::Parent(p) = parsed[child] else {
                unreachable!("non-root vertices have parents")
            };
            inputs[p] = child.to_string();
        }
        SpanCorruption::TwoRoots => {
            let v = non_roots[rng.random_range(0..non_roots.len())];
            inputs[v] = ROOT_MARKER.to_string();
        }
        SpanCorruption::ZeroRoots => {
            let nbrs = g.neighbors(root);
            inputs[root] = nbrs[rng.random_range(0..nbrs.len())].to_string();
        }
        SpanCorruption::NonNeighbor => {
            let candidates: Vec<(usize, usize)> = non_roots
                .iter()
                .flat_map(|&v| (0..n).filter(move |&j| j != v && !g.has_edge(v, j)).map(move |j| (v, j)))
                .collect();
            if candidates.is_empty() {
                return Err(gen_err("every vertex pair is adjacent; no non-neighbor parent exists"));
            }
            let (v, j) = candidates[rng.random_range(0..candidates.len())];
            inputs[v] = j.to_string();
        }
    }
    Ok(())
}

fn bits(n: usize, ones: impl IntoIterator<Item = usize>) -> Vec<String> {
    let mut out = vec!["0".to_string(); n];
    for i in ones {
        out[i] = "1".to_string();
    }
    out
}

/// Build the instance described by `spec`; deterministic per `(spec, seed)`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Instance, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = build_graph(&spec.graph, &mut rng)?;
    let n = g.n();
    let Some(kind) = &spec.inputs else {
        return Ok(Instance::bare(g));
    };
    let (inputs, language, want) = match kind {
        InputKind::NonbipYes | InputKind::NonbipNo => {
            let want = *kind == InputKind::NonbipYes;
            if is_nonbipartite(&g) != want {
                let what = if want { "bipartite" } else { "nonbipartite" };
                return Err(gen_err(format!("{} is {what}", spec.graph)));
            }
            (vec![String::new(); n], LanguageId::Nonbipartite, want)
        }
        InputKind::Leader(i) => {
            if *i >= n {
                return Err(gen_err(format!("leader {i} out of range for {n} vertices")));
            }
            (bits(n, [*i]), LanguageId::Leader, true)
        }
        InputKind::Leaders(k) => {
            if *k > n {
                return Err(gen_err(format!("cannot place {k} leaders on {n} vertices")));
            }
            (bits(n, sample(&mut rng, n, *k)), LanguageId::Leader, *k == 1)
        }
        InputKind::Span => (random_span_inputs(&g, &mut rng), LanguageId::Span, true),
        InputKind::SpanCorrupt(how) => {
            let mut inputs = random_span_inputs(&g, &mut rng);
            corrupt_span(&g, &mut inputs, *how, &mut rng)?;
            (inputs, LanguageId::Span, false)
        }
    };
    let inst = Instance::new(g, inputs)?;
    assert_eq!(
        is_member(&inst, language)?,
        want,
        "generator produced an instance with the wrong membership"
    );
    Ok(inst)
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Cycle(m) => write!(f, "cycle:{m}"),
            GraphKind::Path(m) => write!(f, "path:{m}"),
            GraphKind::Complete(m) => write!(f, "complete:{m}"),
            GraphKind::Star(m) => write!(f, "star:{m}"),
            GraphKind::Tree(m) => write!(f, "tree:{m}"),
            GraphKind::RandomConnected(m, p) => write!(f, "random-connected:{m}:{p}"),
        }
    }
}

impl fmt::Display for SpanCorruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpanCorruption::Cycle => "cycle",
            SpanCorruption::TwoRoots => "two-roots",
            SpanCorruption::ZeroRoots => "zero-roots",
            SpanCorruption::NonNeighbor => "non-neighbor",
        })
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputKind::NonbipYes => f.write_str("nonbip-yes"),
            InputKind::NonbipNo => f.write_str("nonbip-no"),
            InputKind::Leader(i) => write!(f, "leader:{i}"),
            InputKind::Leaders(k) => write!(f, "leaders:{k}"),
            InputKind::Span => f.write_str("span"),
            InputKind::SpanCorrupt(c) => write!(f, "span-corrupt:{c}"),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.graph)?;
        if let Some(inputs) = &self.inputs {
            write!(f, "+{inputs}")?;
        }
        Ok(())
    }
}

fn number<T: FromStr>(field: Option<&str>, what: &str, whole: &str) -> Result<T, GraphError> {
    field
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| gen_err(format!("{whole:?}: missing or invalid {what}")))
}

impl FromStr for GraphKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut it = s.split(':');
        let name = it.next().unwrap_or_default();
        let kind = match name {
            "cycle" => GraphKind::Cycle(number(it.next(), "vertex count", s)?),
            "path" => GraphKind::Path(number(it.next(), "vertex count", s)?),
            "complete" => GraphKind::Complete(number(it.next(), "vertex count", s)?),
            "star" => GraphKind::Star(number(it.next(), "vertex count", s)?),
            "tree" => GraphKind::Tree(number(it.next(), "vertex count", s)?),
            "random-connected" => {
                let m = number(it.next(), "vertex count", s)?;
                let p = number(it.next(), "edge probability", s)?;
                GraphKind::RandomConnected(m, p)
            }
            _ => return Err(gen_err(format!("unknown graph kind {name:?}"))),
        };
        if it.next().is_some() {
            return Err(gen_err(format!("{s:?}: too many fields")));
        }
        Ok(kind)
    }
}

impl FromStr for InputKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let kind = match (name, arg) {
            ("nonbip-yes", None) => InputKind::NonbipYes,
            ("nonbip-no", None) => InputKind::NonbipNo,
            ("leader", Some(_)) => InputKind::Leader(number(arg, "leader id", s)?),
            ("leaders", Some(_)) => InputKind::Leaders(number(arg, "leader count", s)?),
            ("span", None) => InputKind::Span,
            ("span-corrupt", Some(c)) => InputKind::SpanCorrupt(match c {
                "cycle" => SpanCorruption::Cycle,
                "two-roots" => SpanCorruption::TwoRoots,
                "zero-roots" => SpanCorruption::ZeroRoots,
                "non-neighbor" => SpanCorruption::NonNeighbor,
                _ => return Err(gen_err(format!("unknown span corruption {c:?}"))),
            }),
            _ => return Err(gen_err(format!("unknown input kind {s:?}"))),
        };
        Ok(kind)
    }
}

impl FromStr for GeneratorSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (graph, inputs) = match s.split_once('+') {
            Some((g, i)) => (g, Some(i.parse()?)),
            None => (s, None),
        };
        Ok(GeneratorSpec {
            graph: graph.parse()?,
            inputs,
        })
    }
}
