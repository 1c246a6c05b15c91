use super::{pack_fields, LcpError, Labeling};
use crate::graphmodel::{is_valid_spanning_tree, leader_count, parent_map, Instance, SpanInput};

/// `ceil(log2 n)`: bits needed to name one of `n` vertices.
pub fn id_bits(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Per-node decisions; the network accepts iff every node does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpVerdict {
    pub node_accepts: Vec<bool>,
}

impl LcpVerdict {
    pub fn accepted(&self) -> bool {
        self.node_accepts.iter().all(|&a| a)
    }

    pub fn rejecting_nodes(&self) -> Vec<usize> {
        (0..self.node_accepts.len()).filter(|&i| !self.node_accepts[i]).collect()
    }
}

fn check_count(inst: &Instance, labeling: &Labeling) -> Result<(), LcpError> {
    if labeling.len() != inst.n() {
        return Err(LcpError::LabelCount {
            expected: inst.n(),
            actual: labeling.len(),
        });
    }
    Ok(())
}

/// Labels `(root id, distance to the root along parent pointers)`, each
/// `id_bits(n)` wide.
pub fn lcp_prove_span(inst: &Instance) -> Result<Labeling, LcpError> {
    if !is_valid_spanning_tree(inst) {
        return Err(LcpError::Witness("inputs are not a spanning tree".into()));
    }
    let parents = parent_map(inst);
    let root = parents.iter().position(|p| *p == SpanInput::Root).expect("tree has a root");
    let w = id_bits(inst.n());
    let labels = (0..inst.n())
        .map(|start| {
            let (mut v, mut d) = (start, 0u64);
            while let SpanInput::Parent(p) = parents[v] {
                v = p;
                d += 1;
            }
            pack_fields(&[(root as u64, w), (d, w)])
        })
        .collect();
    Ok(Labeling::new(labels))
}

fn decode_all(labeling: &Labeling, widths: [usize; 2]) -> Vec<Option<(u64, u64)>> {
    labeling
        .labels()
        .iter()
        .map(|l| {
            if l.len() != widths[0] + widths[1] {
                return None;
            }
            let read = |from: usize, to: usize| (from..to).fold(0u64, |acc, k| acc << 1 | u64::from(l.get(k)));
            Some((read(0, widths[0]), read(widths[0], l.len())))
        })
        .collect()
}

fn neighbors_agree(inst: &Instance, fields: &[Option<(u64, u64)>], i: usize, root: u64) -> bool {
    inst.graph()
        .neighbors(i)
        .iter()
        .all(|&j| matches!(fields[j], Some((r, _)) if r == root))
}

/// Span checks at every node: neighbors agree on the root id, the root names
/// itself at distance 0, and every other node sits one step below its parent.
pub fn lcp_verify_span(inst: &Instance, labeling: &Labeling) -> Result<LcpVerdict, LcpError> {
    check_count(inst, labeling)?;
    let w = id_bits(inst.n());
    let fields = decode_all(labeling, [w, w]);
    let parents = parent_map(inst);
    let node_accepts = (0..inst.n())
        .map(|i| {
            let Some((root, d)) = fields[i] else { return false };
            if !neighbors_agree(inst, &fields, i, root) {
                return false;
            }
            match parents[i] {
                SpanInput::Root => root == i as u64 && d == 0,
                SpanInput::Parent(p) => {
                    p != i
                        && inst.graph().has_edge(i, p)
                        && matches!(fields[p], Some((_, dp)) if dp.checked_add(1) == Some(d))
                }
                SpanInput::Invalid => false,
            }
        })
        .collect();
    Ok(LcpVerdict { node_accepts })
}

/// Field widths of the Leader verifier's labels `(root id, distance)`. A node
/// counts as the labeled root when its id agrees with the root field in the
/// low `root_bits` bits and its distance is 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LeaderLayout {
    pub root_bits: usize,
    pub dist_bits: usize,
}

impl LeaderLayout {
    /// Full-length labels for `n` vertices.
    pub fn full(n: usize) -> Self {
        let w = id_bits(n);
        LeaderLayout {
            root_bits: w,
            dist_bits: w,
        }
    }

    pub fn label_bits(&self) -> usize {
        self.root_bits + self.dist_bits
    }

    pub(crate) fn id_matches(&self, i: usize, root: u64) -> bool {
        let mask = if self.root_bits >= 64 { u64::MAX } else { (1u64 << self.root_bits) - 1 };
        i as u64 & mask == root
    }

    /// One node's decision from its id, input bit and the decoded labels of
    /// itself and its neighbors (`None` for a malformed label).
    pub(crate) fn node_accepts(
        &self,
        i: usize,
        x: Option<bool>,
        own: Option<(u64, u64)>,
        neighbors: impl IntoIterator<Item = Option<(u64, u64)>>,
    ) -> bool {
        let (Some(x), Some((root, d))) = (x, own) else { return false };
        let mut has_lower = false;
        for nb in neighbors {
            match nb {
                Some((r, dn)) if r == root => has_lower |= d >= 1 && dn == d - 1,
                _ => return false,
            }
        }
        let labeled_root = self.id_matches(i, root) && d == 0;
        x == labeled_root && (labeled_root || has_lower)
    }
}

/// Distances of a BFS tree rooted at the unique leader, plus its id.
pub fn lcp_leader_scheme(inst: &Instance) -> Result<Labeling, LcpError> {
    let leaders = leader_count(inst)?;
    if leaders != 1 {
        return Err(LcpError::Witness(format!("{leaders} leaders, need exactly one")));
    }
    let leader = (0..inst.n())
        .find(|&i| inst.input_bit(i) == Ok(true))
        .expect("one leader");
    let layout = LeaderLayout::full(inst.n());
    let dist = inst.graph().bfs_distances(leader);
    let labels = dist
        .iter()
        .map(|d| {
            pack_fields(&[
                (leader as u64, layout.root_bits),
                (d.expect("connected") as u64, layout.dist_bits),
            ])
        })
        .collect();
    Ok(Labeling::new(labels))
}

/// Leader checks with full-length labels.
pub fn lcp_verify_leader(inst: &Instance, labeling: &Labeling) -> Result<LcpVerdict, LcpError> {
    lcp_verify_leader_with(inst, labeling, LeaderLayout::full(inst.n()))
}

/// Leader checks under an explicit label layout: neighbors agree on the root
/// field, `x(i) = 1` exactly at the labeled root, and every other node has
/// distance at least 1 and a neighbor one step closer.
pub fn lcp_verify_leader_with(
    inst: &Instance,
    labeling: &Labeling,
    layout: LeaderLayout,
) -> Result<LcpVerdict, LcpError> {
    check_count(inst, labeling)?;
    let fields = decode_all(labeling, [layout.root_bits, layout.dist_bits]);
    let node_accepts = (0..inst.n())
        .map(|i| {
            layout.node_accepts(
                i,
                inst.input_bit(i).ok(),
                fields[i],
                inst.graph().neighbors(i).iter().map(|&j| fields[j]),
            )
        })
        .collect();
    Ok(LcpVerdict { node_accepts })
}
