//! Brute-force checks on explicit finite truncations of unfoldings.
//!
//! Everything here works on a materialized finite tree and searches
//! literally, with no fixpoint reasoning, so the fast presentation-level
//! algorithms can be cross-checked against it.

use crate::presentation::{live_nodes, Multiplicity, NodeId, Step, TreePresentation, UNode};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct FtNode {
    pub parent: Option<usize>,
    /// The step that led here; None for the root.
    pub step: Option<Step>,
    pub tag: NodeId,
    pub depth: usize,
    /// The tag survives pruning, so rays pass through this node.
    pub live: bool,
    /// The tag has an ALEPH edge: the materialized children undersample.
    pub truncated: bool,
    /// The incoming step rides an ALEPH edge; false for the root.
    pub via_aleph: bool,
    pub children: Vec<usize>,
}

/// Explicit prefix of an unfolding: every walk up to a depth, with ALEPH
/// edges sampled at a fixed width. Node indices are in breadth-first order,
/// so parents always precede children.
#[derive(Debug, Clone)]
pub struct FiniteTree {
    nodes: Vec<FtNode>,
    depth: usize,
    width: u64,
}

impl FiniteTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn node(&self, i: usize) -> &FtNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[FtNode] {
        &self.nodes
    }

    /// Reconstructs the walk of node `i`.
    pub fn unode(&self, i: usize) -> UNode {
        let mut steps = Vec::with_capacity(self.nodes[i].depth);
        let mut cur = i;
        while let Some(s) = self.nodes[cur].step {
            steps.push(s);
            cur = self.nodes[cur].parent.expect("stepped node has a parent");
        }
        steps.reverse();
        UNode::from_steps(steps)
    }

    /// Index of the node with the given walk, if it was materialized.
    pub fn find(&self, u: &UNode) -> Option<usize> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut cur = 0;
        for step in u.steps() {
            cur = *self.nodes[cur]
                .children
                .iter()
                .find(|&&c| self.nodes[c].step == Some(*step))?;
        }
        Some(cur)
    }

    /// Live nodes without children: with width >= 1 these are exactly the
    /// live nodes at the truncation depth.
    pub fn live_leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].live && self.nodes[i].children.is_empty())
    }
}

/// Materializes all walks of length <= depth, sampling each ALEPH edge at
/// `width` children. Callers are expected to budget with
/// [`truncation_size`] first; this allocates one node per counted walk.
pub fn truncate(p: &TreePresentation, depth: usize, width: u64) -> FiniteTree {
    let mut tree = FiniteTree { nodes: Vec::new(), depth, width };
    let Some(root) = p.root() else { return tree };
    let live = live_nodes(p);
    let has_aleph =
        |v: NodeId| p.out_edges(v).any(|(_, e)| e.mult.is_aleph());
    tree.nodes.push(FtNode {
        parent: None,
        step: None,
        tag: root,
        depth: 0,
        live: live[root.0],
        truncated: has_aleph(root),
        via_aleph: false,
        children: Vec::new(),
    });
    let mut i = 0;
    while i < tree.nodes.len() {
        let (tag, d) = (tree.nodes[i].tag, tree.nodes[i].depth);
        if d < depth {
            for (ord, e) in p.out_edges(tag) {
                let n = match e.mult {
                    Multiplicity::Fin(n) => u64::from(n),
                    Multiplicity::Aleph(_) => width,
                };
                for child in 0..n {
                    let idx = tree.nodes.len();
                    tree.nodes.push(FtNode {
                        parent: Some(i),
                        step: Some(Step { edge: ord, child }),
                        tag: e.dst,
                        depth: d + 1,
                        live: live[e.dst.0],
                        truncated: has_aleph(e.dst),
                        via_aleph: e.mult.is_aleph(),
                        children: Vec::new(),
                    });
                    tree.nodes[i].children.push(idx);
                }
            }
        }
        i += 1;
    }
    tree
}

/// Node count of `truncate(p, depth, width)` without materializing it,
/// saturating at u128::MAX. Used to budget oracle runs.
pub fn truncation_size(p: &TreePresentation, depth: usize, width: u64) -> u128 {
    let Some(root) = p.root() else { return 0 };
    let n = p.node_count();
    let mut level = vec![0u128; n];
    level[root.0] = 1;
    let mut total: u128 = 1;
    for _ in 0..depth {
        let mut next = vec![0u128; n];
        for e in p.edges() {
            let w = match e.mult {
                Multiplicity::Fin(k) => u128::from(k),
                Multiplicity::Aleph(_) => u128::from(width),
            };
            next[e.dst.0] =
                next[e.dst.0].saturating_add(level[e.src.0].saturating_mul(w));
        }
        let layer: u128 = next.iter().fold(0u128, |a, &b| a.saturating_add(b));
        total = total.saturating_add(layer);
        if total == u128::MAX {
            return total;
        }
        level = next;
    }
    total
}

/// Number of presentation nodes that survive pruning.
pub fn live_count(p: &TreePresentation) -> usize {
    live_nodes(p).iter().filter(|&&l| l).count()
}

/// Pattern depth at which the finite searches decide fixpoint emptiness
/// exactly: one level per possible derivative stage.
pub fn sound_pattern_depth(p: &TreePresentation) -> usize {
    live_count(p)
}

/// Truncation depth that provably hosts every pattern of depth
/// max(sound, 3): each pattern level costs at most one walk through all
/// live presentation nodes plus the branching step itself.
pub fn sound_truncation_depth(p: &TreePresentation) -> usize {
    let n = live_count(p);
    n.max(3) * (n + 1)
}

/// True iff an order-embedding of the full binary tree of the given depth
/// into the live part of `f` exists. Bottom-up search: a node roots a
/// depth-k embedding iff it is live and two incomparable strict descendants
/// root depth-(k-1) embeddings.
pub fn oracle_embedding_search(f: &FiniteTree, d: usize) -> bool {
    let n = f.len();
    if n == 0 {
        return false;
    }
    // any[i]: subtree at i contains a depth-k root; pair[i]: it contains two
    // incomparable depth-k roots.
    let mut any_prev = vec![false; n];
    let mut pair_prev = vec![false; n];
    for k in 0..=d {
        let mut emb = vec![false; n];
        let mut any = vec![false; n];
        let mut pair = vec![false; n];
        for i in (0..n).rev() {
            let node = f.node(i);
            emb[i] = node.live
                && (k == 0 || {
                    let cnt = node.children.iter().filter(|&&c| any_prev[c]).count();
                    cnt >= 2 || node.children.iter().any(|&c| pair_prev[c])
                });
            any[i] = emb[i] || node.children.iter().any(|&c| any[c]);
            let cnt = node.children.iter().filter(|&&c| any[c]).count();
            pair[i] = cnt >= 2 || node.children.iter().any(|&c| pair[c]);
        }
        any_prev = any;
        pair_prev = pair;
    }
    any_prev[0]
}

/// True iff `f` hosts a depth-d pattern of infinite branching of width w:
/// a live node, above it a node whose ALEPH edge (live target) delivers at
/// least w sampled children, each hosting the depth-(d-1) pattern. The w
/// children must come from one ALEPH edge so that they stand for the
/// infinitely many siblings they sample.
pub fn oracle_baire_search(f: &FiniteTree, d: usize, w: u64) -> bool {
    let n = f.len();
    if n == 0 || f.width() < w {
        return false;
    }
    let mut pat: Vec<bool> = f.nodes().iter().map(|node| node.live).collect();
    for _level in 0..d {
        // up[i]: some node weakly above i (reached through live nodes) has
        // one ALEPH edge delivering >= w live children that all carry `pat`.
        let mut up = vec![false; n];
        for i in (0..n).rev() {
            let node = f.node(i);
            let mut by_edge: Vec<(usize, u64)> = Vec::new();
            for &c in &node.children {
                if f.node(c).via_aleph && pat[c] {
                    let e = f.node(c).step.expect("child has a step").edge;
                    match by_edge.iter_mut().find(|(e2, _)| *e2 == e) {
                        Some((_, cnt)) => *cnt += 1,
                        None => by_edge.push((e, 1)),
                    }
                }
            }
            let self_cond = by_edge.iter().any(|&(_, cnt)| cnt >= w);
            up[i] = (node.live && self_cond)
                || node.children.iter().any(|&c| f.node(c).live && up[c]);
        }
        for i in 0..n {
            pat[i] = f.node(i).live && up[i];
        }
    }
    // The pattern may be rooted anywhere.
    pat.iter().any(|&b| b)
}

/// Stages needed to empty the finite tree by repeatedly deleting every node
/// whose strict up-set (descendants) is a chain.
pub fn oracle_finite_derivative(f: &FiniteTree) -> usize {
    let n = f.len();
    let mut removed = vec![false; n];
    let mut remaining = n;
    let mut stages = 0;
    while remaining > 0 {
        stages += 1;
        // chain[i]: i's remaining descendants are totally ordered.
        let mut chain = vec![false; n];
        for i in (0..n).rev() {
            if removed[i] {
                continue;
            }
            let kids: Vec<usize> =
                f.node(i).children.iter().copied().filter(|&c| !removed[c]).collect();
            chain[i] = match kids.as_slice() {
                [] => true,
                // The child's own subtree must also be a chain.
                [c] => chain[*c],
                _ => false,
            };
        }
        let before = remaining;
        for i in 0..n {
            if !removed[i] && chain[i] {
                removed[i] = true;
                remaining -= 1;
            }
        }
        assert!(remaining < before, "every finite tree has a removable leaf");
    }
    stages
}

/// True iff every live leaf of `f` has an ancestor-or-self among the given
/// walks. Errors when a member is deeper than the truncation or falls
/// outside the sampled width.
pub fn oracle_cover_check(f: &FiniteTree, members: &[UNode]) -> Result<bool> {
    let mut marked = vec![false; f.len()];
    for m in members {
        if f.depth() > 0 && m.depth() >= f.depth() {
            return Err(Error::precondition(format!(
                "member {m} is not strictly shallower than the truncation depth {}",
                f.depth()
            )));
        }
        let idx = f.find(m).ok_or_else(|| {
            Error::precondition(format!("member {m} falls outside the sampled truncation"))
        })?;
        marked[idx] = true;
    }
    let mut covered = marked;
    for i in 0..f.len() {
        if let Some(par) = f.node(i).parent {
            covered[i] = covered[i] || covered[par];
        }
    }
    Ok(f.live_leaves().all(|i| covered[i]))
}
