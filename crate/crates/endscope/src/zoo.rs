//! Fixed example presentations and graphs used across tests and docs.
//!
//! Each generator documents the unfolding or graph it denotes, so tests can
//! reference the intended shape rather than re-deriving it.

use crate::graphs::FiniteGraph;
use crate::presentation::{parse_tree, TreePresentation};

/// Full binary tree: one node, one FIN(2) self-loop. Compact ray space.
pub fn bin() -> TreePresentation {
    parse_tree("tree bin\nroot v\nedge v v 2\n").expect("well formed")
}

/// Countably branching tree (every node has one child per natural number).
/// Ray space homeomorphic to the irrationals; nowhere locally compact.
pub fn baire() -> TreePresentation {
    parse_tree("tree baire\nroot v\nedge v v *\n").expect("well formed")
}

/// Countable star of rays: the root emits ALEPH(0) arms, each arm is a
/// single ray. One limit point plus countably many isolated rays.
pub fn star() -> TreePresentation {
    parse_tree("tree star\nroot r\nedge r c *\nedge c c 1\n").expect("well formed")
}

/// Star of ALEPH(1) many rays: not Lindelof, extent ALEPH(1).
pub fn uncountable_star() -> TreePresentation {
    parse_tree("tree uncountable-star\nroot r\nedge r c w1\nedge c c 1\n").expect("well formed")
}

/// One ray: a single FIN(1) self-loop. The simplest nonempty ray space.
pub fn single_loop() -> TreePresentation {
    parse_tree("tree single-loop\nroot v\nedge v v 1\n").expect("well formed")
}

/// Comb: a spine ray that emits one tooth ray at every level. Countable,
/// scattered of rank 2.
pub fn comb() -> TreePresentation {
    parse_tree("tree comb\nroot s\nedge s s 1\nedge s c 1\nedge c c 1\n").expect("well formed")
}

/// Two stacked ALEPH(0) layers over a tail ray: every node of the top layer
/// is a limit of limits. COMPACT derivative needs three stages to empty.
pub fn double_fan() -> TreePresentation {
    parse_tree("tree double-fan\nroot a\nedge a b *\nedge b c *\nedge c c 1\n")
        .expect("well formed")
}

/// Path a-b-c.
pub fn p3() -> FiniteGraph {
    FiniteGraph::new("p3", &["a", "b", "c"], &[("a", "b"), ("b", "c")]).expect("well formed")
}

/// Triangle.
pub fn k3() -> FiniteGraph {
    FiniteGraph::new("k3", &["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")])
        .expect("well formed")
}

/// Four-cycle a-b-c-d-a.
pub fn c4() -> FiniteGraph {
    FiniteGraph::new(
        "c4",
        &["a", "b", "c", "d"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")],
    )
    .expect("well formed")
}

/// Star with center `c` and leaves `v0..v{n-1}`.
pub fn star_graph(n: usize) -> FiniteGraph {
    let leaves: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut vertices: Vec<&str> = leaves.iter().map(|s| s.as_str()).collect();
    vertices.push("c");
    let edges: Vec<(&str, &str)> = leaves.iter().map(|l| ("c", l.as_str())).collect();
    FiniteGraph::new("star", &vertices, &edges).expect("well formed")
}

/// Path v0-v1-...-v{n-1}.
pub fn path_graph(n: usize) -> FiniteGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let vertices: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edges: Vec<(&str, &str)> =
        (1..n).map(|i| (names[i - 1].as_str(), names[i].as_str())).collect();
    FiniteGraph::new("path", &vertices, &edges).expect("well formed")
}

/// Complete core `k0..k{core-1}` where each core vertex carries a pendant
/// path of `len` extra vertices. The core dominates every vertex within
/// distance `len`, which makes it a useful dominating set for edge-end
/// transforms.
pub fn core_with_pendant_paths(core: usize, len: usize) -> FiniteGraph {
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for i in 0..core {
        names.push(format!("k{i}"));
        for j in 0..i {
            edges.push((format!("k{j}"), format!("k{i}")));
        }
        let mut prev = format!("k{i}");
        for step in 0..len {
            let v = format!("k{i}p{step}");
            edges.push((prev.clone(), v.clone()));
            names.push(v.clone());
            prev = v;
        }
    }
    let vertices: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edge_refs: Vec<(&str, &str)> =
        edges.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
    FiniteGraph::new("core-paths", &vertices, &edge_refs).expect("well formed")
}

/// Rooted `arity`-ary tree of the given depth with each sibling group
/// completed to a clique. Root is `t`; the child of `u` in position `i` is
/// `u` followed by digit `i` (so `arity` is capped at 10).
pub fn sibling_clique_tree(arity: usize, depth: usize) -> FiniteGraph {
    assert!((1..=10).contains(&arity), "positions are single digits");
    let mut names = vec!["t".to_string()];
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut frontier = vec!["t".to_string()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for parent in &frontier {
            let kids: Vec<String> = (0..arity).map(|i| format!("{parent}{i}")).collect();
            for (i, k) in kids.iter().enumerate() {
                edges.push((parent.clone(), k.clone()));
                for older in &kids[..i] {
                    edges.push((older.clone(), k.clone()));
                }
            }
            names.extend(kids.iter().cloned());
            next.extend(kids);
        }
        frontier = next;
    }
    let vertices: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edge_refs: Vec<(&str, &str)> =
        edges.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
    FiniteGraph::new("sibling-cliques", &vertices, &edge_refs).expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Multiplicity;

    #[test]
    fn tree_zoo_shapes() {
        assert_eq!(bin().edges().len(), 1);
        assert_eq!(star().edges().len(), 2);
        assert_eq!(comb().edges().len(), 3);
        assert_eq!(double_fan().node_count(), 3);
        assert_eq!(uncountable_star().edges()[0].mult, Multiplicity::Aleph(1));
    }

    #[test]
    fn graph_zoo_shapes() {
        assert_eq!(p3().edge_count(), 2);
        assert_eq!(k3().edge_count(), 3);
        assert_eq!(c4().edge_count(), 4);
        assert_eq!(star_graph(4).vertex_count(), 5);
        assert_eq!(path_graph(3).edge_count(), 2);
        let g = core_with_pendant_paths(3, 2);
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 3 + 6);
        let t = sibling_clique_tree(2, 2);
        assert_eq!(t.vertex_count(), 7);
        assert_eq!(t.edge_count(), 6 + 3);
    }
}
