use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::{id_bits, pack_fields, LcpError, Labeling, LeaderLayout};
use crate::graphmodel::{cycle_graph, leader_count, Instance};

/// Largest labeling space of one small cycle the attack will enumerate, as a
/// power of two.
pub const GLUE_BUDGET_BITS: u64 = 24;

/// Window widths tried at each splice point.
pub const GLUE_WIDTHS: [usize; 3] = [1, 2, 3];

impl LeaderLayout {
    /// Layout for a verifier with `label_bits`-bit labels that must handle
    /// cycles of `m` and `2m` vertices: distance bits first (enough for the
    /// radius of `C_m`), whatever remains names the root, capped at what
    /// `2m` ids need.
    pub fn for_glue(label_bits: usize, m: usize) -> Self {
        let dist_bits = label_bits.min(id_bits(m / 2 + 1));
        let root_bits = (label_bits - dist_bits).min(id_bits(2 * m));
        LeaderLayout { root_bits, dist_bits }
    }
}

/// A labeled no-instance that every node accepts.
#[derive(Clone, Debug, PartialEq)]
pub struct FoolingInstance {
    pub instance: Instance,
    pub labeling: Labeling,
    /// Window width of the splice.
    pub width: usize,
    /// Leader positions of the two source cycles.
    pub sources: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlueOutcome {
    pub layout: LeaderLayout,
    pub cycle_size: usize,
    /// Labeled yes-cycles examined.
    pub labelings_searched: u64,
    /// How many of them every node accepts.
    pub accepting_yes_labelings: usize,
    /// Distinct accepting local views.
    pub accepting_views: usize,
    /// Widths at which some splice was certified.
    pub widths_found: Vec<usize>,
    /// The splice at the smallest successful width.
    pub fooling: Option<FoolingInstance>,
}

/// Accepting labeled `C_m` with a single leader: leader position and the
/// packed label of each vertex.
struct Accepting {
    leader: usize,
    labels: Vec<u64>,
}

/// What one node's decision depends on: its id as the verifier reads it, its
/// input, its label, and its neighbors' labels.
type View = (u64, bool, u64, [u64; 2]);

fn split(layout: LeaderLayout, label: u64) -> (u64, u64) {
    (label >> layout.dist_bits, label & ((1u64 << layout.dist_bits) - 1))
}

fn view(layout: LeaderLayout, i: usize, x: bool, labels: &[u64]) -> View {
    let len = labels.len();
    let (a, b) = (labels[(i + len - 1) % len], labels[(i + 1) % len]);
    let id = i as u64 & ((1u64 << layout.root_bits) - 1);
    (id, x, labels[i], [a.min(b), a.max(b)])
}

fn cycle_accepts(layout: LeaderLayout, leader: Option<usize>, labels: &[u64]) -> bool {
    let len = labels.len();
    (0..len).all(|i| {
        let nb = [labels[(i + len - 1) % len], labels[(i + 1) % len]];
        layout.node_accepts(
            i,
            Some(leader == Some(i)),
            Some(split(layout, labels[i])),
            nb.iter().map(|&l| Some(split(layout, l))),
        )
    })
}

/// Enumerate every labeling of every single-leader `C_m`, keep those the
/// `layout` verifier accepts, and try to splice two of them into a
/// two-leader `C_{2m}` in which every local view already occurs in an
/// accepting yes-instance. The splice is certified by rerunning the verifier
/// on the glued cycle and by the ground-truth leader count.
pub fn glue_attack(layout: LeaderLayout, m: usize) -> Result<GlueOutcome, LcpError> {
    if m < 3 {
        return Err(LcpError::Generation(format!("cycles need at least 3 vertices, got {m}")));
    }
    let bits = (layout.label_bits() * m) as u64;
    if bits > GLUE_BUDGET_BITS {
        return Err(LcpError::Capacity {
            requested: bits,
            limit: GLUE_BUDGET_BITS,
        });
    }
    let lb = layout.label_bits();
    let mask = (1u64 << lb) - 1;
    let accepting: Vec<Accepting> = (0..m)
        .flat_map(|leader| {
            (0..1u64 << bits)
                .into_par_iter()
                .filter_map(|code| {
                    let labels: Vec<u64> = (0..m).map(|j| code >> (j * lb) & mask).collect();
                    cycle_accepts(layout, Some(leader), &labels).then_some(Accepting { leader, labels })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let views: HashSet<View> = accepting
        .iter()
        .flat_map(|a| (0..m).map(move |i| view(layout, i, i == a.leader, &a.labels)))
        .collect();

    let mut widths_found = Vec::new();
    let mut fooling = None;
    for width in GLUE_WIDTHS {
        if let Some(f) = splice(layout, m, &accepting, &views, width)? {
            widths_found.push(width);
            fooling.get_or_insert(f);
        }
    }
    Ok(GlueOutcome {
        layout,
        cycle_size: m,
        labelings_searched: m as u64 * (1u64 << bits),
        accepting_yes_labelings: accepting.len(),
        accepting_views: views.len(),
        widths_found,
        fooling,
    })
}

/// State of position `j` of `a` read from rotation `r`.
fn state(a: &Accepting, r: usize, j: usize) -> (bool, u64) {
    let k = (r + j) % a.labels.len();
    (k == a.leader, a.labels[k])
}

type Window = Vec<(bool, u64)>;

/// The `width` states on both sides of the cut of rotation `r`.
fn window(a: &Accepting, r: usize, width: usize) -> Window {
    let m = a.labels.len();
    (0..width).chain(m - width..m).map(|j| state(a, r, j)).collect()
}

/// Search ordered pairs of rotated accepting cycles whose windows coincide,
/// distinct sources before self-gluing, and return the first certified splice.
fn splice(
    layout: LeaderLayout,
    m: usize,
    accepting: &[Accepting],
    views: &HashSet<View>,
    width: usize,
) -> Result<Option<FoolingInstance>, LcpError> {
    // Window contents -> (labeling, cut position) pairs that show them.
    let mut by_window: HashMap<Window, Vec<(usize, usize)>> = HashMap::new();
    for (idx, a) in accepting.iter().enumerate() {
        for r in 0..m {
            by_window.entry(window(a, r, width)).or_default().push((idx, r));
        }
    }
    for distinct in [true, false] {
        for (ai, a) in accepting.iter().enumerate() {
            for ra in 0..m {
                let Some(partners) = by_window.get(&window(a, ra, width)) else { continue };
                for &(bi, rb) in partners.iter().filter(|&&(bi, _)| (bi != ai) == distinct) {
                    let b = &accepting[bi];
                    let glued: Vec<(bool, u64)> = (0..m)
                        .map(|j| state(a, ra, j))
                        .chain((0..m).map(|j| state(b, rb, j)))
                        .collect();
                    if let Some(f) = certify(layout, &glued, views)? {
                        return Ok(Some(FoolingInstance {
                            width,
                            sources: (a.leader, b.leader),
                            ..f
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn certify(layout: LeaderLayout, glued: &[(bool, u64)], views: &HashSet<View>) -> Result<Option<FoolingInstance>, LcpError> {
    let labels: Vec<u64> = glued.iter().map(|s| s.1).collect();
    if !(0..glued.len()).all(|i| views.contains(&view(layout, i, glued[i].0, &labels))) {
        return Ok(None);
    }
    let inputs = glued.iter().map(|s| if s.0 { "1" } else { "0" }.to_string()).collect();
    let instance = Instance::new(cycle_graph(glued.len())?, inputs)?;
    let labeling = Labeling::new(
        labels
            .iter()
            .map(|&l| {
                let (root, d) = split(layout, l);
                pack_fields(&[(root, layout.root_bits), (d, layout.dist_bits)])
            })
            .collect(),
    );
    let accepted = super::lcp_verify_leader_with(&instance, &labeling, layout)?.accepted();
    if !accepted || leader_count(&instance)? == 1 {
        return Ok(None);
    }
    Ok(Some(FoolingInstance {
        instance,
        labeling,
        width: 0,
        sources: (0, 0),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        assert_eq!(LeaderLayout::for_glue(2, 4), LeaderLayout { root_bits: 0, dist_bits: 2 });
        assert_eq!(LeaderLayout::for_glue(8, 4), LeaderLayout { root_bits: 3, dist_bits: 2 });
        assert_eq!(LeaderLayout::for_glue(1, 4), LeaderLayout { root_bits: 0, dist_bits: 1 });
    }

    #[test]
    fn degenerate_and_over_budget() {
        assert!(matches!(glue_attack(LeaderLayout::for_glue(2, 2), 2), Err(LcpError::Generation(_))));
        assert!(matches!(
            glue_attack(LeaderLayout::for_glue(8, 5), 5),
            Err(LcpError::Capacity { requested: 30, limit: 24 })
        ));
    }
}
