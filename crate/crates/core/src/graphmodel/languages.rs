use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use super::{Graph, GraphError};

/// Input string marking the root of a claimed spanning tree.
pub const ROOT_MARKER: &str = "root";

/// A graph with one input string per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    graph: Graph,
    inputs: Vec<String>,
}

impl Instance {
    pub fn new(graph: Graph, inputs: Vec<String>) -> Result<Self, GraphError> {
        if inputs.len() != graph.n() {
            return Err(GraphError::InputCount {
                expected: graph.n(),
                actual: inputs.len(),
            });
        }
        Ok(Instance { graph, inputs })
    }

    /// An instance whose inputs are all empty strings.
    pub fn bare(graph: Graph) -> Self {
        let inputs = vec![String::new(); graph.n()];
        Instance { graph, inputs }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn input(&self, i: usize) -> &str {
        &self.inputs[i]
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn with_inputs(&self, inputs: Vec<String>) -> Result<Self, GraphError> {
        Instance::new(self.graph.clone(), inputs)
    }

    /// `x(i)` read as a single bit.
    pub fn input_bit(&self, i: usize) -> Result<bool, GraphError> {
        match self.inputs[i].as_str() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(GraphError::InputFormat {
                vertex: i,
                value: other.to_string(),
            }),
        }
    }
}

/// The graph languages with dPCP protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageId {
    Nonbipartite,
    Leader,
    Span,
}

impl LanguageId {
    pub const ALL: [LanguageId; 3] = [LanguageId::Nonbipartite, LanguageId::Leader, LanguageId::Span];

    /// Protocol id byte used in proof files.
    pub fn protocol_id(self) -> u8 {
        match self {
            LanguageId::Nonbipartite => 1,
            LanguageId::Leader => 2,
            LanguageId::Span => 3,
        }
    }

    pub fn from_protocol_id(id: u8) -> Option<Self> {
        LanguageId::ALL.into_iter().find(|l| l.protocol_id() == id)
    }

    pub fn name(self) -> &'static str {
        match self {
            LanguageId::Nonbipartite => "nonbipartite",
            LanguageId::Leader => "leader",
            LanguageId::Span => "span",
        }
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LanguageId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nonbipartite" | "nonbip" => Ok(LanguageId::Nonbipartite),
            "leader" => Ok(LanguageId::Leader),
            "span" | "spanning-tree" => Ok(LanguageId::Span),
            other => Err(GraphError::UnknownLanguage(other.to_string())),
        }
    }
}

/// One vertex's Span input, parsed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanInput {
    Root,
    Parent(usize),
    /// Neither the root marker nor a decimal vertex id.
    Invalid,
}

impl SpanInput {
    pub fn parse(s: &str) -> SpanInput {
        if s == ROOT_MARKER {
            return SpanInput::Root;
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return SpanInput::Invalid;
        }
        s.parse().map(SpanInput::Parent).unwrap_or(SpanInput::Invalid)
    }
}

/// Parsed Span inputs of every vertex.
pub fn parent_map(inst: &Instance) -> Vec<SpanInput> {
    inst.inputs().iter().map(|s| SpanInput::parse(s)).collect()
}

/// Proper 2-coloring by breadth-first search, if one exists.
pub fn two_coloring(g: &Graph) -> Option<Vec<bool>> {
    let mut color: Vec<Option<bool>> = vec![None; g.n()];
    for start in 0..g.n() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued vertices are colored");
            for &v in g.neighbors(u) {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.expect("all colored")).collect())
}

pub fn is_nonbipartite(g: &Graph) -> bool {
    two_coloring(g).is_none()
}

/// Length of the shortest odd cycle, if any.
fn odd_girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..g.n() {
        let dist = g.bfs_distances(s);
        for (u, v) in g.edges() {
            if let (Some(du), Some(dv)) = (dist[u], dist[v]) {
                if du == dv {
                    let len = 2 * du + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Vertex set of a shortest odd cycle, smallest sorted id sequence on ties.
pub fn find_odd_cycle(g: &Graph) -> Option<Vec<usize>> {
    let target = odd_girth(g)?;
    // The lexicographically smallest sorted set starts with the smallest
    // possible minimum vertex, so scan candidate minima in order.
    for s in 0..g.n() {
        let allowed = |v: usize| v >= s;
        let back = restricted_distances(g, s, &allowed);
        let mut best: Option<Vec<usize>> = None;
        let mut path = vec![s];
        let mut on_path = vec![false; g.n()];
        on_path[s] = true;
        extend_cycle(g, target, &back, &allowed, &mut path, &mut on_path, &mut best);
        if best.is_some() {
            return best;
        }
    }
    unreachable!("an odd girth implies an odd cycle")
}

fn restricted_distances(g: &Graph, s: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued");
        for &v in g.neighbors(u) {
            if allowed(v) && dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn extend_cycle(
    g: &Graph,
    target: usize,
    back: &[Option<usize>],
    allowed: &dyn Fn(usize) -> bool,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Option<Vec<usize>>,
) {
    let last = *path.last().expect("path starts at s");
    if path.len() == target {
        if g.has_edge(last, path[0]) {
            let mut set = path.clone();
            set.sort_unstable();
            if best.as_ref().is_none_or(|b| set < *b) {
                *best = Some(set);
            }
        }
        return;
    }
    for &v in g.neighbors(last) {
        if !allowed(v) || on_path[v] {
            continue;
        }
        // After visiting v the walk still needs back[v] steps to close.
        match back[v] {
            Some(d) if path.len() + d <= target => {}
            _ => continue,
        }
        path.push(v);
        on_path[v] = true;
        extend_cycle(g, target, back, allowed, path, on_path, best);
        on_path[v] = false;
        path.pop();
    }
}

/// Number of vertices whose input is `1`.
pub fn leader_count(inst: &Instance) -> Result<usize, GraphError> {
    (0..inst.n()).try_fold(0, |acc, i| Ok(acc + usize::from(inst.input_bit(i)?)))
}

/// True iff the inputs name exactly one root and a parent neighbor for every
/// other vertex, and every parent chain ends at the root.
pub fn is_valid_spanning_tree(inst: &Instance) -> bool {
    let parents = parent_map(inst);
    let g = inst.graph();
    let roots = parents.iter().filter(|p| **p == SpanInput::Root).count();
    if roots != 1 {
        return false;
    }
    for (i, p) in parents.iter().enumerate() {
        match *p {
            SpanInput::Root => {}
            SpanInput::Parent(j) if j != i && g.has_edge(i, j) => {}
            _ => return false,
        }
    }
    (0..inst.n()).all(|start| {
        let mut v = start;
        for _ in 0..inst.n() {
            match parents[v] {
                SpanInput::Root => return true,
                SpanInput::Parent(j) => v = j,
                SpanInput::Invalid => return false,
            }
        }
        parents[v] == SpanInput::Root
    })
}

/// Ground-truth membership of `inst` in `language`.
pub fn is_member(inst: &Instance, language: LanguageId) -> Result<bool, GraphError> {
    Ok(match language {
        LanguageId::Nonbipartite => is_nonbipartite(inst.graph()),
        LanguageId::Leader => leader_count(inst)? == 1,
        LanguageId::Span => is_valid_spanning_tree(inst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::{cycle_graph, path_graph};

    fn with_inputs(g: Graph, xs: &[&str]) -> Instance {
        Instance::new(g, xs.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn bipartiteness_examples() {
        assert!(!is_nonbipartite(&cycle_graph(4).unwrap()));
        assert!(is_nonbipartite(&cycle_graph(5).unwrap()));
        assert!(is_nonbipartite(&cycle_graph(3).unwrap()));
    }

    #[test]
    fn odd_cycle_examples() {
        assert_eq!(find_odd_cycle(&cycle_graph(3).unwrap()), Some(vec![0, 1, 2]));
        assert_eq!(find_odd_cycle(&cycle_graph(4).unwrap()), None);
        let chord = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]).unwrap();
        assert_eq!(find_odd_cycle(&chord), Some(vec![0, 1, 2]));
    }

    #[test]
    fn odd_cycle_ties_pick_smallest_sequence() {
        // Triangles {1,2,3} and {0,3,4}; the second sorts first.
        let g = Graph::new(5, &[(1, 2), (2, 3), (1, 3), (0, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(find_odd_cycle(&g), Some(vec![0, 3, 4]));
    }

    #[test]
    fn leader_counts() {
        assert_eq!(leader_count(&with_inputs(path_graph(3).unwrap(), &["0", "1", "0"])).unwrap(), 1);
        assert_eq!(leader_count(&with_inputs(path_graph(3).unwrap(), &["0", "0", "0"])).unwrap(), 0);
        assert_eq!(leader_count(&with_inputs(cycle_graph(4).unwrap(), &["1"; 4])).unwrap(), 4);
        let bad = with_inputs(path_graph(2).unwrap(), &["1", "x"]);
        assert_eq!(
            leader_count(&bad),
            Err(GraphError::InputFormat {
                vertex: 1,
                value: "x".into()
            })
        );
    }

    #[test]
    fn spanning_tree_examples() {
        let p3 = path_graph(3).unwrap();
        assert!(is_valid_spanning_tree(&with_inputs(p3.clone(), &["root", "0", "1"])));
        assert!(!is_valid_spanning_tree(&with_inputs(p3.clone(), &["1", "0", "1"])));
        let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(is_valid_spanning_tree(&with_inputs(star, &["root", "0", "0", "0"])));
        // Parent 2 is not a neighbor of 0.
        assert!(!is_valid_spanning_tree(&with_inputs(p3.clone(), &["2", "root", "1"])));
        assert!(!is_valid_spanning_tree(&with_inputs(p3.clone(), &["root", "root", "1"])));
        assert!(!is_valid_spanning_tree(&with_inputs(p3, &["root", "0", "+1"])));
    }

    #[test]
    fn span_input_parsing() {
        assert_eq!(SpanInput::parse("root"), SpanInput::Root);
        assert_eq!(SpanInput::parse("12"), SpanInput::Parent(12));
        assert_eq!(SpanInput::parse(""), SpanInput::Invalid);
        assert_eq!(SpanInput::parse("Root"), SpanInput::Invalid);
        assert_eq!(SpanInput::parse("-1"), SpanInput::Invalid);
    }

    #[test]
    fn language_ids_round_trip() {
        for l in LanguageId::ALL {
            assert_eq!(l.name().parse::<LanguageId>().unwrap(), l);
            assert_eq!(LanguageId::from_protocol_id(l.protocol_id()), Some(l));
        }
        assert!("sym".parse::<LanguageId>().is_err());
    }
}
