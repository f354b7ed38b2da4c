//! Finite presentations of infinite trees and their unfolding nodes.
//!
//! A presentation is a finite pointed multigraph: nodes, a root, and an
//! ordered edge list with multiplicities. Its unfolding T(P) is the rooted
//! tree of all finite walks from the root, where an edge of multiplicity
//! FIN(n) contributes n children per visit and an ALEPH edge contributes one
//! child per natural number. ALEPH(k) for k >= 1 is purely symbolic: those
//! edges are never unfolded child-by-child, they only feed cardinal
//! arithmetic.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Edge multiplicity: FIN(n) with n >= 1, or the symbolic infinite cardinal
/// ALEPH(k). The derived order is total: FIN(n) < FIN(m) iff n < m, every
/// FIN below every ALEPH, ALEPH(j) < ALEPH(k) iff j < k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Fin(u32),
    Aleph(u32),
}

impl Multiplicity {
    pub fn is_aleph(self) -> bool {
        matches!(self, Multiplicity::Aleph(_))
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Fin(n) => write!(f, "{n}"),
            Multiplicity::Aleph(0) => write!(f, "*"),
            Multiplicity::Aleph(k) => write!(f, "w{k}"),
        }
    }
}

/// Symbolic cardinal for reported degrees: FINITE(n) or ALEPH(k), ordered
/// the same way as [`Multiplicity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CardinalSym {
    Finite(u32),
    Aleph(u32),
}

impl fmt::Display for CardinalSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalSym::Finite(n) => write!(f, "finite:{n}"),
            CardinalSym::Aleph(k) => write!(f, "aleph:{k}"),
        }
    }
}

impl FromStr for CardinalSym {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(n) = s.strip_prefix("finite:") {
            return n.parse().map(CardinalSym::Finite).map_err(|e| e.to_string());
        }
        if let Some(k) = s.strip_prefix("aleph:") {
            return k.parse().map(CardinalSym::Aleph).map_err(|e| e.to_string());
        }
        Err(format!("expected finite:<n> or aleph:<k>, got {s:?}"))
    }
}

impl Serialize for CardinalSym {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CardinalSym {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Index of a presentation node. Indices follow the lexicographic order of
/// node names, so iteration over ids is iteration over sorted names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub mult: Multiplicity,
}

/// Finite pointed multigraph presenting an infinite tree. The designated
/// EMPTY value (zero nodes, no root) presents the empty ray space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePresentation {
    name: String,
    nodes: Vec<String>,
    root: Option<NodeId>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl TreePresentation {
    /// Builds a presentation from explicit parts. Unlike the file format
    /// this allows sink nodes (no outgoing edges); they are pruned away.
    pub fn new(
        name: &str,
        nodes: &[&str],
        root: &str,
        edges: &[(&str, &str, Multiplicity)],
    ) -> Result<Self> {
        let mut sorted: Vec<String> = nodes.iter().map(|s| s.to_string()).collect();
        sorted.sort();
        sorted.dedup();
        let find = |n: &str| -> Result<NodeId> {
            sorted
                .binary_search_by(|probe| probe.as_str().cmp(n))
                .map(NodeId)
                .map_err(|_| Error::UnknownNode(n.to_string()))
        };
        let root = find(root)?;
        let mut es = Vec::with_capacity(edges.len());
        for &(src, dst, mult) in edges {
            if mult == Multiplicity::Fin(0) {
                return Err(Error::precondition("FIN(0) multiplicity"));
            }
            es.push(Edge { src: find(src)?, dst: find(dst)?, mult });
        }
        let out = build_out(sorted.len(), &es);
        Ok(TreePresentation { name: name.to_string(), nodes: sorted, root: Some(root), edges: es, out })
    }

    /// The designated EMPTY presentation: zero nodes, empty ray space.
    pub fn empty(name: &str) -> Self {
        TreePresentation {
            name: name.to_string(),
            nodes: Vec::new(),
            root: None,
            edges: Vec::new(),
            out: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id.0]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.nodes.binary_search_by(|probe| probe.as_str().cmp(name)).ok().map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, ordinal: usize) -> Option<&Edge> {
        self.edges.get(ordinal)
    }

    /// Outgoing edges of `v` as (ordinal, edge), in ordinal order.
    pub fn out_edges(&self, v: NodeId) -> impl Iterator<Item = (usize, &Edge)> {
        self.out[v.0].iter().map(move |&i| (i, &self.edges[i]))
    }

    /// Renders the presentation in the `.tree` file format.
    pub fn to_tree_text(&self) -> String {
        let mut s = format!("tree {}\n", self.name);
        if let Some(r) = self.root {
            s.push_str(&format!("root {}\n", self.node_name(r)));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "edge {} {} {}\n",
                self.node_name(e.src),
                self.node_name(e.dst),
                e.mult
            ));
        }
        s
    }

    /// Copy with every ALEPH(0) multiplicity replaced by FIN(cap) and the
    /// given name. Nodes and edge ordinals are preserved, so legal walks of
    /// the result are step-identical legal walks of `self`.
    pub fn cap_aleph0(&self, cap: u32, name: &str) -> TreePresentation {
        assert!(cap >= 1, "cap must be a positive finite multiplicity");
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                mult: if e.mult == Multiplicity::Aleph(0) { Multiplicity::Fin(cap) } else { e.mult },
                ..*e
            })
            .collect();
        let out = build_out(self.nodes.len(), &edges);
        TreePresentation {
            name: name.to_string(),
            nodes: self.nodes.clone(),
            root: self.root,
            edges,
            out,
        }
    }
}

fn build_out(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        out[e.src.0].push(i);
    }
    out
}

/// Parses the `.tree` format: a `tree <name>` line, a `root <node>` line,
/// then `edge <src> <dst> <mult>` lines where `<mult>` is a positive
/// integer, `*` for ALEPH(0), or `w<k>` for ALEPH(k) with k >= 1. `#`
/// starts a comment. A node is known iff it is the root or the source of
/// some edge; referencing an unknown node is an error.
pub fn parse_tree(text: &str) -> Result<TreePresentation> {
    let mut name: Option<String> = None;
    let mut root_name: Option<String> = None;
    let mut raw_edges: Vec<(String, String, Multiplicity)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let mut toks = tokens(line);
        let Some((kw, col)) = toks.next() else { continue };
        match kw {
            "tree" => {
                let (n, _) = expect_tok(&mut toks, line_no, "tree name")?;
                if name.replace(n.to_string()).is_some() {
                    return Err(Error::parse(line_no, col, "duplicate tree line"));
                }
            }
            "root" => {
                let (n, _) = expect_tok(&mut toks, line_no, "root node")?;
                if root_name.replace(n.to_string()).is_some() {
                    return Err(Error::parse(line_no, col, "duplicate root line"));
                }
            }
            "edge" => {
                let (src, _) = expect_tok(&mut toks, line_no, "edge source")?;
                let (dst, _) = expect_tok(&mut toks, line_no, "edge destination")?;
                let (m, mcol) = expect_tok(&mut toks, line_no, "edge multiplicity")?;
                let mult = parse_mult(m).map_err(|e| Error::parse(line_no, mcol, e))?;
                raw_edges.push((src.to_string(), dst.to_string(), mult));
            }
            other => {
                return Err(Error::parse(line_no, col, format!("unknown directive {other:?}")));
            }
        }
        if let Some((extra, col)) = toks.next() {
            return Err(Error::parse(line_no, col, format!("trailing token {extra:?}")));
        }
    }

    let name = name.ok_or_else(|| Error::parse(1, 1, "missing tree line"))?;
    let root_name = root_name.ok_or_else(|| Error::parse(1, 1, "missing root"))?;

    // Known nodes: the root plus every edge source.
    let mut nodes: Vec<String> = raw_edges.iter().map(|(s, _, _)| s.clone()).collect();
    nodes.push(root_name.clone());
    nodes.sort();
    nodes.dedup();
    for (_, dst, _) in &raw_edges {
        if nodes.binary_search(dst).is_err() {
            return Err(Error::UnknownNode(dst.clone()));
        }
    }

    let node_refs: Vec<&str> = nodes.iter().map(|s| s.as_str()).collect();
    let edge_refs: Vec<(&str, &str, Multiplicity)> =
        raw_edges.iter().map(|(s, d, m)| (s.as_str(), d.as_str(), *m)).collect();
    TreePresentation::new(&name, &node_refs, &root_name, &edge_refs)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Whitespace-separated tokens with their 1-based column positions.
fn tokens(line: &str) -> impl Iterator<Item = (&str, usize)> {
    line.split_whitespace().map(move |tok| {
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        (tok, col)
    })
}

fn expect_tok<'a>(
    toks: &mut impl Iterator<Item = (&'a str, usize)>,
    line: usize,
    what: &str,
) -> Result<(&'a str, usize)> {
    toks.next().ok_or_else(|| Error::parse(line, 1, format!("missing {what}")))
}

fn parse_mult(tok: &str) -> std::result::Result<Multiplicity, String> {
    if tok == "*" {
        return Ok(Multiplicity::Aleph(0));
    }
    if let Some(k) = tok.strip_prefix('w') {
        let k: u32 = k.parse().map_err(|_| format!("bad aleph index {tok:?}"))?;
        if k == 0 {
            return Err("w0 is not allowed; write * for ALEPH(0)".to_string());
        }
        return Ok(Multiplicity::Aleph(k));
    }
    let n: u32 = tok.parse().map_err(|_| format!("bad multiplicity {tok:?}"))?;
    if n == 0 {
        return Err("FIN(0) multiplicity".to_string());
    }
    Ok(Multiplicity::Fin(n))
}

/// Presentation nodes that lie on some ray of the unfolding: reachable from
/// the root and able to reach a directed cycle. `live[v]` indexed by NodeId.
pub fn live_nodes(p: &TreePresentation) -> Vec<bool> {
    let n = p.node_count();
    let mut live = vec![false; n];
    let Some(root) = p.root() else { return live };

    // Forward reachability from the root.
    let mut reach = vec![false; n];
    let mut queue = VecDeque::from([root.0]);
    reach[root.0] = true;
    while let Some(v) = queue.pop_front() {
        for (_, e) in p.out_edges(NodeId(v)) {
            if !reach[e.dst.0] {
                reach[e.dst.0] = true;
                queue.push_back(e.dst.0);
            }
        }
    }

    // succ_reach[v][u]: a walk of length >= 1 from v to u exists.
    let mut succ_reach = vec![vec![false; n]; n];
    for (v, row) in succ_reach.iter_mut().enumerate() {
        let mut queue: VecDeque<usize> =
            p.out_edges(NodeId(v)).map(|(_, e)| e.dst.0).collect();
        for &u in &queue {
            row[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for (_, e) in p.out_edges(NodeId(u)) {
                if !row[e.dst.0] {
                    row[e.dst.0] = true;
                    queue.push_back(e.dst.0);
                }
            }
        }
    }

    for v in 0..n {
        if !reach[v] {
            continue;
        }
        // v reaches a cycle iff it reaches (in >= 0 steps) some u on a cycle.
        live[v] = (0..n).any(|u| succ_reach[u][u] && (v == u || succ_reach[v][u]));
    }
    live
}

/// Restriction to the nodes on rays: result's unfolding is the pruned tree
/// of `p`'s unfolding (same rays). If the root dies the result is EMPTY.
pub fn prune(p: &TreePresentation) -> TreePresentation {
    let live = live_nodes(p);
    let Some(root) = p.root() else { return TreePresentation::empty(p.name()) };
    if !live[root.0] {
        return TreePresentation::empty(p.name());
    }
    let kept: Vec<&str> =
        p.node_ids().filter(|v| live[v.0]).map(|v| p.node_name(v)).collect();
    let edges: Vec<(&str, &str, Multiplicity)> = p
        .edges()
        .iter()
        .filter(|e| live[e.src.0] && live[e.dst.0])
        .map(|e| (p.node_name(e.src), p.node_name(e.dst), e.mult))
        .collect();
    TreePresentation::new(p.name(), &kept, p.node_name(root), &edges)
        .expect("pruned presentation is well formed")
}

/// One step of a walk: which edge ordinal was taken and which of the edge's
/// children (for FIN(n) an index below n, for ALEPH(0) any natural).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: usize,
    pub child: u64,
}

/// A node of the unfolding: a finite legal walk from the root, serialized
/// as `@` (root) or `e<edge>.<child>` segments joined by `/`. The derived
/// order is lexicographic on steps; the tree order is [`UNode::is_prefix_of`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UNode {
    steps: Vec<Step>,
}

impl UNode {
    pub fn root() -> Self {
        UNode { steps: Vec::new() }
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        UNode { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn child(&self, edge: usize, child: u64) -> UNode {
        let mut steps = self.steps.clone();
        steps.push(Step { edge, child });
        UNode { steps }
    }

    pub fn parent(&self) -> Option<UNode> {
        if self.steps.is_empty() {
            None
        } else {
            Some(UNode { steps: self.steps[..self.steps.len() - 1].to_vec() })
        }
    }

    /// Tree order of the unfolding: non-strict prefix.
    pub fn is_prefix_of(&self, other: &UNode) -> bool {
        other.steps.len() >= self.steps.len() && other.steps[..self.steps.len()] == self.steps[..]
    }

    pub fn is_strict_prefix_of(&self, other: &UNode) -> bool {
        other.steps.len() > self.steps.len() && self.is_prefix_of(other)
    }

    pub fn comparable(&self, other: &UNode) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }
}

impl fmt::Display for UNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "@");
        }
        let mut first = true;
        for s in &self.steps {
            if !first {
                write!(f, "/")?;
            }
            write!(f, "e{}.{}", s.edge, s.child)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for UNode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "@" {
            return Ok(UNode::root());
        }
        let bad = |msg: &str| Error::IllegalUnode { unode: s.to_string(), msg: msg.to_string() };
        let mut steps = Vec::new();
        for seg in s.split('/') {
            let rest = seg.strip_prefix('e').ok_or_else(|| bad("segment must start with e"))?;
            let (edge, child) =
                rest.split_once('.').ok_or_else(|| bad("segment must be e<edge>.<child>"))?;
            let edge = edge.parse().map_err(|_| bad("bad edge ordinal"))?;
            let child = child.parse().map_err(|_| bad("bad child index"))?;
            steps.push(Step { edge, child });
        }
        Ok(UNode { steps })
    }
}

impl Serialize for UNode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UNode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Validates that `t` is a legal walk of `p`'s unfolding and returns its
/// tag, the presentation node it ends at.
pub fn check_unode(p: &TreePresentation, t: &UNode) -> Result<NodeId> {
    let bad = |msg: String| Error::IllegalUnode { unode: t.to_string(), msg };
    let mut at = p.root().ok_or_else(|| bad("empty presentation has no unfolding".into()))?;
    for (i, s) in t.steps().iter().enumerate() {
        let e = p.edge(s.edge).ok_or_else(|| bad(format!("no edge with ordinal {}", s.edge)))?;
        if e.src != at {
            return Err(bad(format!(
                "step {i} uses edge {} out of {}, but the walk is at {}",
                s.edge,
                p.node_name(e.src),
                p.node_name(at)
            )));
        }
        match e.mult {
            Multiplicity::Fin(n) => {
                if s.child >= u64::from(n) {
                    return Err(bad(format!(
                        "step {i} child index {} out of range for FIN({n})",
                        s.child
                    )));
                }
            }
            Multiplicity::Aleph(_) => {}
        }
        at = e.dst;
    }
    Ok(at)
}

/// Children of a UNode in the unfolding. FIN edges list all children; each
/// ALEPH edge is sampled at indices 0..sample_width and sets the
/// truncated-infinite flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildListing {
    pub children: Vec<UNode>,
    pub truncated_infinite: bool,
}

pub fn children(p: &TreePresentation, t: &UNode, sample_width: u64) -> Result<ChildListing> {
    let tag = check_unode(p, t)?;
    let mut listing = ChildListing { children: Vec::new(), truncated_infinite: false };
    for (ord, e) in p.out_edges(tag) {
        match e.mult {
            Multiplicity::Fin(n) => {
                for c in 0..u64::from(n) {
                    listing.children.push(t.child(ord, c));
                }
            }
            Multiplicity::Aleph(_) => {
                listing.truncated_infinite = true;
                for c in 0..sample_width {
                    listing.children.push(t.child(ord, c));
                }
            }
        }
    }
    Ok(listing)
}

/// The canonical unconstrained sibling index under an ALEPH edge, given the
/// child indices a finite constraint set mentions at that position: one more
/// than the largest mentioned index (0 if none). Siblings beyond every
/// mentioned index are interchangeable, so this one stands for all of them.
pub fn canonical_sibling(mentioned: impl Iterator<Item = u64>) -> u64 {
    mentioned.max().map_or(0, |m| m + 1)
}

/// Set of live presentation nodes as ids, for callers that want set ops.
pub fn live_node_set(p: &TreePresentation) -> BTreeSet<NodeId> {
    live_nodes(p)
        .iter()
        .enumerate()
        .filter_map(|(i, &l)| l.then_some(NodeId(i)))
        .collect()
}
