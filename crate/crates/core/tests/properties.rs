use dpcp_core::gf2core::{decode_proof, encode_proof, BitVec};
use dpcp_core::graphmodel::{
    find_odd_cycle, is_nonbipartite, is_valid_spanning_tree, parse_instance, write_instance, Graph, Instance, LanguageId,
};
use dpcp_core::prover::{honest_proof, span_alphas};
use dpcp_core::protocols::{run_protocol, ProtocolConfig};
use proptest::prelude::*;

/// A connected graph: a random tree plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
        (parents, proptest::collection::vec(any::<bool>(), n * n)).prop_map(move |(parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(k, &p)| (k + 1, p)).collect();
            for u in 0..n {
                for v in 0..u {
                    if extra[u * n + v] && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn brute_bipartite(g: &Graph) -> bool {
    (0..1u32 << g.n()).any(|c| g.edges().all(|(u, v)| (c >> u & 1) != (c >> v & 1)))
}

fn is_cycle_on(g: &Graph, set: &[usize]) -> bool {
    fn extend(g: &Graph, set: &[usize], path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if path.len() == set.len() {
            return g.has_edge(path[0], *path.last().unwrap());
        }
        for k in 0..set.len() {
            if !used[k] && g.has_edge(*path.last().unwrap(), set[k]) {
                used[k] = true;
                path.push(set[k]);
                if extend(g, set, path, used) {
                    return true;
                }
                path.pop();
                used[k] = false;
            }
        }
        false
    }
    let mut used = vec![false; set.len()];
    used[0] = true;
    set.len() >= 3 && extend(g, set, &mut vec![set[0]], &mut used)
}

/// One root, every parent is a neighbor, and the parent edges connect all
/// vertices (n - 1 edges, so a tree).
fn brute_spanning_tree(g: &Graph, xs: &[String]) -> bool {
    let n = g.n();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, v: usize) -> usize {
        if c[v] != v {
            let r = find(c, c[v]);
            c[v] = r;
        }
        c[v]
    }
    let mut roots = 0;
    for (i, x) in xs.iter().enumerate() {
        if x == "root" {
            roots += 1;
            continue;
        }
        let Ok(p) = x.parse::<usize>() else { return false };
        if p >= n || !g.has_edge(i, p) {
            return false;
        }
        let (a, b) = (find(&mut comp, i), find(&mut comp, p));
        if a == b {
            return false;
        }
        comp[a] = b;
    }
    roots == 1
}

fn span_inputs(g: Graph) -> impl Strategy<Value = Instance> {
    let n = g.n();
    proptest::collection::vec(0..n + 3, n).prop_map(move |choice| {
        let xs = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let nb = g.neighbors(i);
                match c {
                    c if c < nb.len() => nb[c].to_string(),
                    c if c == n => "root".to_string(),
                    c if c == n + 1 => "junk".to_string(),
                    c => (c % n).to_string(),
                }
            })
            .collect();
        Instance::new(g.clone(), xs).unwrap()
    })
}

/// Parent pointers of a BFS tree rooted at `root`.
fn bfs_tree_inputs(g: &Graph, root: usize) -> Vec<String> {
    let d = g.bfs_distances(root);
    (0..g.n())
        .map(|i| {
            if i == root {
                "root".into()
            } else {
                let di = d[i].unwrap();
                g.neighbors(i).iter().find(|&&j| d[j] == Some(di - 1)).unwrap().to_string()
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nonbipartite_matches_brute_force(g in connected_graph(8)) {
        prop_assert_eq!(is_nonbipartite(&g), !brute_bipartite(&g));
        match find_odd_cycle(&g) {
            Some(c) => {
                prop_assert!(c.len() % 2 == 1);
                prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(is_cycle_on(&g, &c));
            }
            None => prop_assert!(brute_bipartite(&g)),
        }
    }

    #[test]
    fn spanning_tree_matches_brute_force(inst in connected_graph(6).prop_flat_map(span_inputs)) {
        prop_assert_eq!(is_valid_spanning_tree(&inst), brute_spanning_tree(inst.graph(), inst.inputs()));
    }

    #[test]
    fn span_alphas_telescope(g in connected_graph(6), r in any::<prop::sample::Index>()) {
        let root = r.index(g.n());
        let inst = Instance::new(g.clone(), bfs_tree_inputs(&g, root)).unwrap();
        prop_assert!(is_valid_spanning_tree(&inst));
        let alphas = span_alphas(&inst).unwrap();
        prop_assert_eq!(&alphas[0], &BitVec::basis(g.n(), root).unwrap());
        for i in 0..g.n() {
            let e = BitVec::basis(g.n(), i).unwrap();
            let own = &alphas[1 + i];
            if i == root {
                prop_assert_eq!(own, &e);
            } else {
                let p: usize = inst.input(i).parse().unwrap();
                prop_assert_eq!(own.xor(&alphas[1 + p]).unwrap(), e);
            }
        }
    }

    #[test]
    fn honest_proofs_always_accepted(g in connected_graph(7), r in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let n = g.n();
        let leader = r.index(n);
        let mut cases = vec![
            (LanguageId::Leader, Instance::new(g.clone(), (0..n).map(|i| u8::from(i == leader).to_string()).collect()).unwrap()),
            (LanguageId::Span, Instance::new(g.clone(), bfs_tree_inputs(&g, leader)).unwrap()),
        ];
        if is_nonbipartite(&g) {
            cases.push((LanguageId::Nonbipartite, Instance::bare(g.clone())));
        }
        for (lang, inst) in cases {
            let proof = honest_proof(&inst, lang).unwrap();
            let cfg = ProtocolConfig::new(lang).with_blr_repetitions(2).with_verifier_repetitions(2);
            prop_assert!(run_protocol(&inst, &proof, &cfg, seed).unwrap().accepted());
            let (id, back) = decode_proof(&encode_proof(&proof, lang.protocol_id())).unwrap();
            prop_assert_eq!(id, lang.protocol_id());
            prop_assert_eq!(back, proof);
        }
    }

    #[test]
    fn instance_text_round_trips(inst in connected_graph(8).prop_flat_map(span_inputs)) {
        prop_assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }
}
