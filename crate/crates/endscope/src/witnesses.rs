//! Finite-depth certificates extracted from nonempty derivative fixpoints
//! and a checker that validates them against the unfolding order alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::derivatives::{DerivOperator, DerivativeTrace};
use crate::presentation::{check_unode, Multiplicity, NodeId, TreePresentation, UNode};

/// Prefix of an order-embedding of the full binary tree: every binary
/// string of length <= depth maps to an unfolding node, preserving and
/// reflecting the prefix order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BinaryEmbeddingPrefix {
    pub depth: usize,
    pub map: BTreeMap<String, UNode>,
}

/// Prefix of an embedding of finitely-branching-nowhere ω^{<ω}: phi embeds
/// digit strings, and above each phi(s) sits tOf(s) whose single ALEPH edge
/// delivers the next level phi(s⌢0..width-1) as immediate children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BairePatternPrefix {
    pub depth: usize,
    pub width: u64,
    pub phi: BTreeMap<String, UNode>,
    pub t_of: BTreeMap<String, UNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Witness {
    Binary(BinaryEmbeddingPrefix),
    Baire(BairePatternPrefix),
}

/// Shortest walk from the root whose endpoint is tagged in `f`, realized
/// with child index 0 at every step; edges are explored in ordinal order so
/// the result is the lexicographically least among shortest. Any walk
/// reaching `f` passes only through nodes that reach a cycle, so the
/// intermediate tags are automatically live.
fn path_to_fixpoint(
    p: &TreePresentation,
    f: &std::collections::BTreeSet<NodeId>,
) -> (UNode, NodeId) {
    let root = p.root().expect("nonempty fixpoint implies a root");
    let mut prev: BTreeMap<NodeId, (NodeId, usize)> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([root]);
    let mut seen = std::collections::BTreeSet::from([root]);
    while let Some(v) = queue.pop_front() {
        if f.contains(&v) {
            let mut rev = Vec::new();
            let mut cur = v;
            while cur != root {
                let (par, ord) = prev[&cur];
                rev.push(crate::presentation::Step { edge: ord, child: 0 });
                cur = par;
            }
            rev.reverse();
            return (UNode::from_steps(rev), v);
        }
        for (ord, e) in p.out_edges(v) {
            if seen.insert(e.dst) {
                prev.insert(e.dst, (v, ord));
                queue.push_back(e.dst);
            }
        }
    }
    unreachable!("a nonempty fixpoint is reachable from the root");
}

/// Walks from `u` (tagged `tag`, inside `f`) along forced FIN(1) edges to
/// the first branching node, then returns the two lexicographically least
/// child continuations with tags in `f`. Exists for every fixpoint member:
/// chain-shaped nodes would have been removed.
fn branch_pair(
    p: &TreePresentation,
    f: &std::collections::BTreeSet<NodeId>,
    u: &UNode,
    tag: NodeId,
) -> ((UNode, NodeId), (UNode, NodeId)) {
    let mut node = u.clone();
    let mut cur = tag;
    let mut guard = 0;
    loop {
        let into_f: Vec<(usize, &crate::presentation::Edge)> =
            p.out_edges(cur).filter(|(_, e)| f.contains(&e.dst)).collect();
        if let [(ord, e)] = into_f.as_slice() {
            if e.mult == Multiplicity::Fin(1) {
                node = node.child(*ord, 0);
                cur = e.dst;
                guard += 1;
                assert!(guard <= f.len(), "fixpoint members are never chain-shaped");
                continue;
            }
        }
        let mut candidates = Vec::new();
        for (ord, e) in into_f {
            let avail = match e.mult {
                Multiplicity::Fin(n) => u64::from(n),
                Multiplicity::Aleph(_) => 2,
            };
            for c in 0..avail.min(2) {
                candidates.push((node.child(ord, c), e.dst));
            }
        }
        assert!(candidates.len() >= 2, "fixpoint members branch");
        let mut it = candidates.into_iter();
        return (it.next().unwrap(), it.next().unwrap());
    }
}

/// Depth-d binary-embedding certificate, or None exactly when the SCATTER
/// fixpoint is empty.
pub fn binary_witness(
    p: &TreePresentation,
    trace: &DerivativeTrace,
    depth: usize,
) -> Option<BinaryEmbeddingPrefix> {
    assert_eq!(trace.operator, DerivOperator::Scatter, "binary witnesses come from SCATTER traces");
    if trace.fixpoint_empty {
        return None;
    }
    let f = trace.fixpoint();
    let mut map = BTreeMap::new();
    let mut frontier = vec![(String::new(), path_to_fixpoint(p, f))];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (s, (u, tag)) in frontier {
            let (zero, one) = branch_pair(p, f, &u, tag);
            map.insert(s.clone(), u);
            next.push((format!("{s}0"), zero));
            next.push((format!("{s}1"), one));
        }
        frontier = next;
    }
    for (s, (u, _)) in frontier {
        map.insert(s, u);
    }
    Some(BinaryEmbeddingPrefix { depth, map })
}

/// Depth-d width-w infinite-branching certificate, or None exactly when the
/// COMPACT fixpoint is empty. Width is capped at 9 so digit strings index
/// the pattern.
pub fn baire_witness(
    p: &TreePresentation,
    trace: &DerivativeTrace,
    depth: usize,
    width: u64,
) -> Option<BairePatternPrefix> {
    assert_eq!(trace.operator, DerivOperator::Compact, "baire witnesses come from COMPACT traces");
    assert!((1..=9).contains(&width), "width must be a single digit");
    if trace.fixpoint_empty {
        return None;
    }
    let f = trace.fixpoint();
    let mut phi = BTreeMap::new();
    let mut t_of = BTreeMap::new();
    let mut frontier = vec![(String::new(), path_to_fixpoint(p, f))];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (s, (u, tag)) in frontier {
            let (t_node, ord, dst) = nearest_aleph(p, f, &u, tag);
            phi.insert(s.clone(), u);
            t_of.insert(s.clone(), t_node.clone());
            for n in 0..width {
                next.push((format!("{s}{n}"), (t_node.child(ord, n), dst)));
            }
        }
        frontier = next;
    }
    for (s, (u, _)) in frontier {
        phi.insert(s, u);
    }
    Some(BairePatternPrefix { depth, width, phi, t_of })
}

/// Breadth-first from `tag` through fixpoint tags (walks realized with
/// child index 0) to the nearest node carrying an ALEPH edge back into the
/// fixpoint; returns that node, the least such edge ordinal, and its
/// target. Exists for every fixpoint member: ALEPH-free nodes would have
/// been removed.
fn nearest_aleph(
    p: &TreePresentation,
    f: &std::collections::BTreeSet<NodeId>,
    u: &UNode,
    tag: NodeId,
) -> (UNode, usize, NodeId) {
    let aleph_into_f = |v: NodeId| {
        p.out_edges(v).find(|(_, e)| e.mult.is_aleph() && f.contains(&e.dst))
    };
    let mut prev: BTreeMap<NodeId, (NodeId, usize)> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([tag]);
    let mut seen = std::collections::BTreeSet::from([tag]);
    while let Some(v) = queue.pop_front() {
        if let Some((ord, e)) = aleph_into_f(v) {
            let mut rev = Vec::new();
            let mut cur = v;
            while cur != tag {
                let (par, o) = prev[&cur];
                rev.push(crate::presentation::Step { edge: o, child: 0 });
                cur = par;
            }
            rev.reverse();
            let mut node = u.clone();
            for s in rev {
                node = node.child(s.edge, s.child);
            }
            return (node, ord, e.dst);
        }
        for (ord, e) in p.out_edges(v) {
            if f.contains(&e.dst) && seen.insert(e.dst) {
                prev.insert(e.dst, (v, ord));
                queue.push_back(e.dst);
            }
        }
    }
    unreachable!("fixpoint members always reach an ALEPH edge inside the fixpoint");
}

/// Checks a witness against the unfolding order alone; Err carries a
/// diagnostic. No derivative machinery is consulted.
pub fn verify_witness(p: &TreePresentation, w: &Witness) -> std::result::Result<(), String> {
    match w {
        Witness::Binary(b) => verify_binary(p, b),
        Witness::Baire(b) => verify_baire(p, b),
    }
}

fn check_image(p: &TreePresentation, key: &str, u: &UNode) -> std::result::Result<(), String> {
    check_unode(p, u).map(|_| ()).map_err(|e| format!("image of {key:?} is illegal: {e}"))
}

fn verify_binary(p: &TreePresentation, b: &BinaryEmbeddingPrefix) -> std::result::Result<(), String> {
    if b.depth > 32 {
        return Err("depth too large to enumerate".into());
    }
    let expect = (1u64 << (b.depth + 1)) - 1;
    if b.map.len() as u64 != expect {
        return Err(format!("domain has {} entries, expected {expect}", b.map.len()));
    }
    for (s, u) in &b.map {
        if s.len() > b.depth || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(format!("key {s:?} is not a binary string of length <= {}", b.depth));
        }
        check_image(p, s, u)?;
    }
    order_embedding_iff(&b.map)
}

fn verify_baire(p: &TreePresentation, b: &BairePatternPrefix) -> std::result::Result<(), String> {
    if !(1..=9).contains(&b.width) {
        return Err(format!("width {} is not a single digit", b.width));
    }
    let digit_ok = |s: &str| {
        s.chars().all(|c| c.is_ascii_digit() && (c as u64 - '0' as u64) < b.width)
    };
    let level_count = |levels: usize| -> u64 {
        (0..=levels as u32).map(|i| b.width.pow(i)).sum()
    };
    if b.phi.len() as u64 != level_count(b.depth) {
        return Err(format!("phi has {} entries, expected {}", b.phi.len(), level_count(b.depth)));
    }
    let t_expect = if b.depth == 0 { 0 } else { level_count(b.depth - 1) };
    if b.t_of.len() as u64 != t_expect {
        return Err(format!("tOf has {} entries, expected {t_expect}", b.t_of.len()));
    }
    for (s, u) in b.phi.iter().chain(b.t_of.iter()) {
        if s.len() > b.depth || !digit_ok(s) {
            return Err(format!("key {s:?} is not a digit string of length <= {}", b.depth));
        }
        check_image(p, s, u)?;
    }
    for (s, t) in &b.t_of {
        let phi_s = b.phi.get(s).ok_or_else(|| format!("tOf key {s:?} missing from phi"))?;
        if !phi_s.is_prefix_of(t) {
            return Err(format!("tOf({s:?}) does not extend phi({s:?})"));
        }
        let mut edge_ord = None;
        for n in 0..b.width {
            let key = format!("{s}{n}");
            let child = b.phi.get(&key).ok_or_else(|| format!("phi missing {key:?}"))?;
            if child.parent().as_ref() != Some(t) {
                return Err(format!("phi({key:?}) is not an immediate child of tOf({s:?})"));
            }
            let step = *child.steps().last().expect("strict extension has a last step");
            match edge_ord {
                None => edge_ord = Some(step.edge),
                Some(o) if o != step.edge => {
                    return Err(format!("children of tOf({s:?}) use different edges"));
                }
                _ => {}
            }
        }
        let ord = edge_ord.expect("width >= 1");
        let mult = p.edge(ord).ok_or_else(|| format!("edge e{ord} does not exist"))?.mult;
        if !mult.is_aleph() {
            return Err(format!("children of tOf({s:?}) ride a finite edge; the pattern needs an infinite one"));
        }
    }
    order_embedding_iff(&b.phi)
}

/// s ⊊ t in the string prefix order iff image(s) ⊊ image(t) in the
/// unfolding order, over all ordered pairs.
fn order_embedding_iff(map: &BTreeMap<String, UNode>) -> std::result::Result<(), String> {
    for (s, us) in map {
        for (t, ut) in map {
            if s == t {
                continue;
            }
            let dom = t.starts_with(s.as_str());
            let img = us.is_strict_prefix_of(ut);
            if dom != img {
                return Err(format!(
                    "order violated on ({s:?}, {t:?}): domain {} image {}",
                    if dom { "<" } else { "not<" },
                    if img { "<" } else { "not<" }
                ));
            }
        }
    }
    Ok(())
}
