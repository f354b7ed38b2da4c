//! Seeded random instance generators for cross-checking the presentation
//! algorithms against the finite-truncation oracles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graphs::FiniteGraph;
use crate::oracle::{self, truncation_size};
use crate::presentation::{Multiplicity, TreePresentation, UNode};

/// Largest explicit truncation any generated presentation may need, both at
/// its own sound depth and at the fixed CLI probe depth.
pub const NODE_BUDGET: u128 = 60_000;
const PROBE_DEPTH: usize = 12;
const PROBE_WIDTH: u64 = 3;

const NAMES: [&str; 10] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];

fn weighted_mult(rng: &mut impl Rng) -> Multiplicity {
    match rng.gen_range(0..100u32) {
        0..=44 => Multiplicity::Fin(1),
        45..=64 => Multiplicity::Fin(2),
        65..=69 => Multiplicity::Fin(3),
        70..=91 => Multiplicity::Aleph(0),
        92..=96 => Multiplicity::Aleph(1),
        _ => Multiplicity::Aleph(2),
    }
}

fn fin_mult(rng: &mut impl Rng) -> Multiplicity {
    match rng.gen_range(0..100u32) {
        0..=59 => Multiplicity::Fin(1),
        60..=89 => Multiplicity::Fin(2),
        _ => Multiplicity::Fin(3),
    }
}

/// One random presentation: small node and edge counts, multiplicities
/// weighted toward chains, rejection-sampled so every truncation the test
/// suite asks for stays within the node budget.
fn random_presentation(rng: &mut ChaCha8Rng, idx: usize, fin_only: bool) -> TreePresentation {
    loop {
        let max_nodes = if fin_only { 5 } else { 6 };
        let n = rng.gen_range(1..=max_nodes);
        let names: Vec<&str> = NAMES[..n].to_vec();
        let root = names[rng.gen_range(0..n)];
        let max_edges = if fin_only { 7 } else { 8 };
        let e = rng.gen_range(1..=max_edges);
        let mut edges = Vec::with_capacity(e);
        for _ in 0..e {
            let src = names[rng.gen_range(0..n)];
            let dst = names[rng.gen_range(0..n)];
            let m = if fin_only { fin_mult(rng) } else { weighted_mult(rng) };
            edges.push((src, dst, m));
        }
        let name = format!("{}{idx}", if fin_only { "fin" } else { "gen" });
        let p = TreePresentation::new(&name, &names, root, &edges)
            .expect("generated endpoints are declared");
        let sound = oracle::sound_truncation_depth(&p);
        if truncation_size(&p, sound, PROBE_WIDTH) <= NODE_BUDGET
            && truncation_size(&p, PROBE_DEPTH, PROBE_WIDTH) <= NODE_BUDGET
        {
            return p;
        }
    }
}

/// Deterministic corpus of mixed presentations (finite and infinite
/// multiplicities, dead nodes, empty prunes all occur).
pub fn presentation_corpus(seed: u64, count: usize) -> Vec<TreePresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_presentation(&mut rng, i, false)).collect()
}

/// Deterministic corpus restricted to finite multiplicities, where cone
/// enumeration is literal (no representative convention).
pub fn fin_presentation_corpus(seed: u64, count: usize) -> Vec<TreePresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_presentation(&mut rng, i, true)).collect()
}

/// Random member set for coverage checks: a handful of live walks sampled
/// from a shallow truncation, sometimes with the root thrown in. Not
/// necessarily covering.
pub fn random_members(rng: &mut ChaCha8Rng, p: &TreePresentation) -> Vec<UNode> {
    let f = oracle::truncate(p, 3, 3);
    let mut live: Vec<UNode> =
        (0..f.len()).filter(|&i| f.node(i).live).map(|i| f.unode(i)).collect();
    if live.is_empty() {
        return Vec::new();
    }
    live.shuffle(rng);
    let k = rng.gen_range(1..=4.min(live.len()));
    let mut members: Vec<UNode> = live.into_iter().take(k).collect();
    if rng.gen_ratio(1, 4) {
        members.push(UNode::root());
    }
    members
}

/// All live walks at exactly the given depth. For finite-multiplicity
/// presentations this is the literal frontier: a covering antichain.
pub fn live_frontier(p: &TreePresentation, depth: usize) -> Vec<UNode> {
    let f = oracle::truncate(p, depth, 1);
    (0..f.len())
        .filter(|&i| f.node(i).live && f.node(i).depth == depth)
        .map(|i| f.unode(i))
        .collect()
}

/// A covering member set built from a frontier by lifting random members
/// to their parents; lifts keep coverage and sometimes break antichainness.
pub fn lifted_cover(rng: &mut ChaCha8Rng, p: &TreePresentation, depth: usize) -> Vec<UNode> {
    live_frontier(p, depth)
        .into_iter()
        .map(|u| {
            if rng.gen_ratio(1, 3) {
                u.parent().unwrap_or(u)
            } else {
                u
            }
        })
        .collect()
}

/// Connected graph on 2..=10 vertices: a random spanning tree plus a few
/// extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, idx: usize) -> FiniteGraph {
    let n = rng.gen_range(2..=10usize);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v, rng.gen_range(0..v))).collect();
    for _ in 0..rng.gen_range(0..=n) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edge_refs: Vec<(&str, &str)> =
        edges.iter().map(|&(u, v)| (names[u].as_str(), names[v].as_str())).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteGraph::new(&format!("g{idx}"), &name_refs, &edge_refs)
        .expect("generated endpoints are declared")
}

pub fn graph_corpus(seed: u64, count: usize) -> Vec<FiniteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_connected_graph(&mut rng, i)).collect()
}

/// Random subset of a graph's vertices, each kept with probability
/// `keep_percent`/100.
pub fn random_vertex_subset(
    rng: &mut ChaCha8Rng,
    g: &FiniteGraph,
    keep_percent: u32,
) -> std::collections::BTreeSet<String> {
    g.vertices()
        .filter(|_| rng.gen_ratio(keep_percent, 100))
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_deterministic() {
        let a = presentation_corpus(7, 10);
        let b = presentation_corpus(7, 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_tree_text(), y.to_tree_text());
        }
        assert_ne!(
            presentation_corpus(7, 1)[0].to_tree_text(),
            presentation_corpus(8, 1)[0].to_tree_text()
        );
    }

    #[test]
    fn corpus_respects_budget() {
        for p in presentation_corpus(11, 40) {
            let sound = oracle::sound_truncation_depth(&p);
            assert!(truncation_size(&p, sound, 3) <= NODE_BUDGET);
            assert!(truncation_size(&p, 12, 3) <= NODE_BUDGET);
        }
    }

    #[test]
    fn corpus_has_variety() {
        let corpus = presentation_corpus(3, 60);
        let with_aleph = corpus
            .iter()
            .filter(|p| p.edges().iter().any(|e| e.mult.is_aleph()))
            .count();
        let with_dead = corpus
            .iter()
            .filter(|p| crate::presentation::live_nodes(p).contains(&false))
            .count();
        assert!(with_aleph >= 10, "expected ALEPH edges in the corpus, saw {with_aleph}");
        assert!(with_dead >= 5, "expected dead nodes in the corpus, saw {with_dead}");
    }

    #[test]
    fn fin_corpus_is_finite_only() {
        for p in fin_presentation_corpus(5, 30) {
            assert!(p.edges().iter().all(|e| !e.mult.is_aleph()));
        }
    }

    #[test]
    fn frontiers_cover() {
        use crate::partitions::cone_cover_check;
        for p in fin_presentation_corpus(9, 20) {
            for depth in 0..=2 {
                let frontier = live_frontier(&p, depth);
                let check = cone_cover_check(&p, &frontier).unwrap();
                assert!(check.covered, "frontier at depth {depth} must cover {}", p.name());
            }
        }
    }

    #[test]
    fn graphs_are_connected() {
        for g in graph_corpus(2, 30) {
            let comps = crate::graphs::components(&g, &Default::default());
            assert_eq!(comps.len(), 1, "{} must be connected", g.name());
            assert!(g.vertex_count() >= 2);
        }
    }
}
