//! Finite-graph toolkit: normal spanning trees, separators, down-closed
//! tree extensions, the edge-end clique transform, and components.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::{Error, Result};

/// Simple finite graph: a vertex set and a set of unordered vertex pairs.
/// No self-loops; edges are stored normalized with the smaller name first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    name: String,
    vertices: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
    adj: BTreeMap<String, BTreeSet<String>>,
}

impl FiniteGraph {
    pub fn new(name: &str, vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let vset: BTreeSet<String> = vertices.iter().map(|s| s.to_string()).collect();
        let mut eset = BTreeSet::new();
        let mut adj: BTreeMap<String, BTreeSet<String>> =
            vset.iter().map(|v| (v.clone(), BTreeSet::new())).collect();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::precondition(format!("self-loop at {u}")));
            }
            for x in [u, v] {
                if !vset.contains(x) {
                    return Err(Error::UnknownVertex(x.to_string()));
                }
            }
            let (a, b) = if u <= v { (u, v) } else { (v, u) };
            eset.insert((a.to_string(), b.to_string()));
            adj.get_mut(u).unwrap().insert(v.to_string());
            adj.get_mut(v).unwrap().insert(u.to_string());
        }
        Ok(FiniteGraph { name: name.to_string(), vertices: vset, edges: eset, adj })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(|s| s.as_str())
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.contains(&(a.to_string(), b.to_string()))
    }

    /// Neighbors in lexicographic order.
    pub fn neighbors(&self, v: &str) -> impl Iterator<Item = &str> {
        self.adj.get(v).into_iter().flatten().map(|s| s.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphParse {
    pub graph: FiniteGraph,
    pub warnings: Vec<String>,
}

/// Parses the `.graph` format: a `graph <name>` line and `edge <u> <v>`
/// lines; `#` starts a comment. Self-loops are errors; duplicate edges are
/// deduplicated with a warning. `^` is reserved for derived vertex names
/// and is illegal in input ids.
pub fn parse_graph(text: &str) -> Result<GraphParse> {
    let mut name: Option<String> = None;
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut toks = line.split_whitespace();
        let Some(kw) = toks.next() else { continue };
        match kw {
            "graph" => {
                let n = toks.next().ok_or_else(|| Error::parse(line_no, 1, "missing graph name"))?;
                if name.replace(n.to_string()).is_some() {
                    return Err(Error::parse(line_no, 1, "duplicate graph line"));
                }
            }
            "edge" => {
                let u = toks.next().ok_or_else(|| Error::parse(line_no, 1, "missing endpoint"))?;
                let v = toks.next().ok_or_else(|| Error::parse(line_no, 1, "missing endpoint"))?;
                for x in [u, v] {
                    if x.contains('^') {
                        return Err(Error::parse(line_no, 1, format!("'^' is reserved: {x:?}")));
                    }
                }
                if u == v {
                    return Err(Error::parse(line_no, 1, format!("self-loop at {u}")));
                }
                let key = if u <= v { (u.to_string(), v.to_string()) } else { (v.to_string(), u.to_string()) };
                if !seen.insert(key) {
                    warnings.push(format!("line {line_no}: duplicate edge {u} {v}"));
                } else {
                    edges.push((u.to_string(), v.to_string()));
                }
            }
            other => return Err(Error::parse(line_no, 1, format!("unknown directive {other:?}"))),
        }
        if let Some(extra) = toks.next() {
            return Err(Error::parse(line_no, 1, format!("trailing token {extra:?}")));
        }
    }

    let name = name.ok_or_else(|| Error::parse(1, 1, "missing graph line"))?;
    let mut vertices: Vec<&str> = edges.iter().flat_map(|(u, v)| [u.as_str(), v.as_str()]).collect();
    vertices.sort();
    vertices.dedup();
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
    Ok(GraphParse { graph: FiniteGraph::new(&name, &vertices, &edge_refs)?, warnings })
}

/// Rooted tree on a subset of a graph's vertices, as parent links. The tree
/// order is ancestry: x <= y iff x lies on the root-to-y path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedSpanTree {
    root: String,
    parent: BTreeMap<String, String>,
}

impl RootedSpanTree {
    pub fn new(root: &str, parent: BTreeMap<String, String>) -> Result<Self> {
        if parent.contains_key(root) {
            return Err(Error::precondition("root must not have a parent"));
        }
        let t = RootedSpanTree { root: root.to_string(), parent };
        // Every vertex must reach the root without revisiting (acyclicity).
        for v in t.parent.keys() {
            let mut seen = BTreeSet::new();
            let mut cur = v.as_str();
            while cur != t.root {
                if !seen.insert(cur.to_string()) {
                    return Err(Error::precondition(format!("parent cycle at {v}")));
                }
                cur = t
                    .parent
                    .get(cur)
                    .ok_or_else(|| Error::precondition(format!("{cur} has no path to the root")))?;
            }
        }
        Ok(t)
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn parent_of(&self, v: &str) -> Option<&str> {
        self.parent.get(v).map(|s| s.as_str())
    }

    pub fn parent_map(&self) -> &BTreeMap<String, String> {
        &self.parent
    }

    pub fn contains(&self, v: &str) -> bool {
        v == self.root || self.parent.contains_key(v)
    }

    pub fn vertex_set(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self.parent.keys().cloned().collect();
        s.insert(self.root.clone());
        s
    }

    /// Tree order: x <= y.
    pub fn le(&self, x: &str, y: &str) -> bool {
        let mut cur = y;
        loop {
            if cur == x {
                return true;
            }
            match self.parent.get(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    pub fn comparable(&self, x: &str, y: &str) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    /// Strict down-closure: vertices strictly below v (root-to-parent path).
    pub fn down_closure_strict(&self, v: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut cur = v;
        while let Some(p) = self.parent.get(cur) {
            out.insert(p.clone());
            cur = p;
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("root {}\n", self.root);
        for (c, p) in &self.parent {
            let _ = writeln!(s, "{c} <- {p}");
        }
        s
    }
}

/// Depth-first spanning tree of `r`'s component, visiting neighbors in
/// lexicographic order. Depth-first trees have no edge between branches, so
/// the result always passes the normality check.
pub fn dfs_normal_tree(g: &FiniteGraph, r: &str) -> Result<RootedSpanTree> {
    fn go(
        g: &FiniteGraph,
        v: &str,
        visited: &mut BTreeSet<String>,
        parent: &mut BTreeMap<String, String>,
    ) {
        for u in g.neighbors(v) {
            if visited.insert(u.to_string()) {
                parent.insert(u.to_string(), v.to_string());
                go(g, u, visited, parent);
            }
        }
    }
    if !g.has_vertex(r) {
        return Err(Error::UnknownVertex(r.to_string()));
    }
    let mut parent = BTreeMap::new();
    let mut visited = BTreeSet::from([r.to_string()]);
    go(g, r, &mut visited, &mut parent);
    RootedSpanTree::new(r, parent)
}

fn component_of(g: &FiniteGraph, r: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([r.to_string()]);
    let mut queue = VecDeque::from([r.to_string()]);
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(&v) {
            if seen.insert(u.to_string()) {
                queue.push_back(u.to_string());
            }
        }
    }
    seen
}

/// First (lexicographically) pair of tree-incomparable vertices joined by a
/// graph path whose internal vertices avoid the tree, or None. Works for
/// subtrees: internal vertices range over all graph vertices outside T.
pub fn normality_violation(g: &FiniteGraph, t: &RootedSpanTree) -> Option<(String, String)> {
    let tv = t.vertex_set();
    let pairs: Vec<(&String, &String)> = tv
        .iter()
        .flat_map(|x| tv.iter().map(move |y| (x, y)))
        .filter(|(x, y)| x < y && !t.comparable(x, y))
        .collect();
    for (x, y) in pairs {
        // Path search from x to y with internals outside T.
        let mut seen = BTreeSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(v) = queue.pop_front() {
            for u in g.neighbors(&v) {
                if u == y {
                    return Some((x.clone(), y.clone()));
                }
                if !tv.contains(u) && seen.insert(u.to_string()) {
                    queue.push_back(u.to_string());
                }
            }
        }
    }
    None
}

/// Normality of a spanning tree: no path between tree-incomparable vertices
/// with all internal vertices outside the tree. Returns the violating pair
/// if any. Errors unless `t` spans its root's component with graph edges.
pub fn is_normal(g: &FiniteGraph, t: &RootedSpanTree) -> Result<Option<(String, String)>> {
    for (c, p) in t.parent_map() {
        if !g.has_edge(c, p) {
            return Err(Error::precondition(format!("tree edge {c}-{p} is not a graph edge")));
        }
    }
    if t.vertex_set() != component_of(g, t.root()) {
        return Err(Error::precondition("tree does not span the root's component"));
    }
    Ok(normality_violation(g, t))
}

/// For incomparable x, y in a normal tree, the intersection of their strict
/// down-closures separates them: no graph path from x to y avoids it.
pub fn separator_check(g: &FiniteGraph, t: &RootedSpanTree, x: &str, y: &str) -> Result<bool> {
    for v in [x, y] {
        if !t.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    if t.comparable(x, y) {
        return Err(Error::precondition(format!("{x} and {y} are comparable")));
    }
    let sep: BTreeSet<String> =
        t.down_closure_strict(x).intersection(&t.down_closure_strict(y)).cloned().collect();
    let mut seen = BTreeSet::from([x.to_string()]);
    let mut queue = VecDeque::from([x.to_string()]);
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(&v) {
            if u == y {
                return Ok(false);
            }
            if !sep.contains(u) && seen.insert(u.to_string()) {
                queue.push_back(u.to_string());
            }
        }
    }
    Ok(true)
}

/// Minimal extension of a down-closed subtree `t` of the normal spanning
/// tree `s` that contains the vertex set `h`: adds each member of `h` and
/// everything strictly below it in `s`. The result is again down-closed,
/// hence normal as a subtree of `s`.
pub fn extend_normal_tree(
    g: &FiniteGraph,
    s: &RootedSpanTree,
    t: &BTreeSet<String>,
    h: &BTreeSet<String>,
) -> Result<RootedSpanTree> {
    if is_normal(g, s)?.is_some() {
        return Err(Error::precondition("base tree is not normal"));
    }
    if !t.contains(s.root()) {
        return Err(Error::precondition("subtree must contain the root"));
    }
    for v in t.iter().chain(h) {
        if !s.contains(v) {
            return Err(Error::precondition(format!("{v} is not in the base tree")));
        }
    }
    for v in t {
        if let Some(p) = s.parent_of(v) {
            if !t.contains(p) {
                return Err(Error::precondition(format!("subtree is not down-closed at {v}")));
            }
        }
    }
    let mut keep = t.clone();
    for x in h {
        keep.extend(s.down_closure_strict(x));
        keep.insert(x.clone());
    }
    let parent: BTreeMap<String, String> = keep
        .iter()
        .filter(|v| v.as_str() != s.root())
        .map(|v| (v.clone(), s.parent_of(v).expect("non-root member has a parent").to_string()))
        .collect();
    let out = RootedSpanTree::new(s.root(), parent)?;
    // Down-closed subtrees of a normal tree are normal: any path between
    // incomparable members must dip into the intersection of their strict
    // down-closures, which the subtree contains.
    assert!(
        normality_violation(g, &out).is_none(),
        "extension of a normal tree stays normal"
    );
    Ok(out)
}

/// How a vertex of the transformed graph relates to the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HgOrigin {
    /// Same vertex as in the input.
    Untouched(String),
    /// Clique vertex `u^v`: stands for the incidence of neighbor `u` with
    /// the expanded vertex `v`.
    Clique { expanded: String, neighbor: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HgResult {
    pub graph: FiniteGraph,
    pub naming: BTreeMap<String, HgOrigin>,
}

/// Expands each vertex v of the declared set D into a clique on its
/// incidences: one vertex `u^v` per neighbor u of v. Edges: (i) each clique
/// is complete; (ii) edges with both ends outside D survive; (iii) an edge
/// {u,v} with only v in D becomes {u, u^v}; (iv) an edge {u,v} inside D
/// becomes {v^u, u^v}.
pub fn hg_transform(g: &FiniteGraph, d: &BTreeSet<String>) -> Result<HgResult> {
    for v in d {
        if !g.has_vertex(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    let clique_name = |u: &str, v: &str| format!("{u}^{v}");
    let mut vertices: Vec<String> = Vec::new();
    let mut naming = BTreeMap::new();
    for v in g.vertices() {
        if !d.contains(v) {
            vertices.push(v.to_string());
            naming.insert(v.to_string(), HgOrigin::Untouched(v.to_string()));
        }
    }
    for v in d {
        for u in g.neighbors(v) {
            let name = clique_name(u, v);
            naming.insert(
                name.clone(),
                HgOrigin::Clique { expanded: v.clone(), neighbor: u.to_string() },
            );
            vertices.push(name);
        }
    }

    let mut edges: Vec<(String, String)> = Vec::new();
    for v in d {
        let k: Vec<&str> = g.neighbors(v).collect();
        for (i, u1) in k.iter().enumerate() {
            for u2 in &k[i + 1..] {
                edges.push((clique_name(u1, v), clique_name(u2, v)));
            }
        }
    }
    for (u, v) in g.edges() {
        match (d.contains(u), d.contains(v)) {
            (false, false) => edges.push((u.to_string(), v.to_string())),
            (false, true) => edges.push((u.to_string(), clique_name(u, v))),
            (true, false) => edges.push((v.to_string(), clique_name(v, u))),
            (true, true) => edges.push((clique_name(v, u), clique_name(u, v))),
        }
    }

    let vrefs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    let erefs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let graph = FiniteGraph::new(&format!("{}-hg", g.name()), &vrefs, &erefs)?;
    Ok(HgResult { graph, naming })
}

/// Connected components of the induced graph on V minus F, sorted by least
/// vertex. Unknown names in F are ignored.
pub fn components(g: &FiniteGraph, f: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let mut out: Vec<BTreeSet<String>> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for v in g.vertices() {
        if f.contains(v) || seen.contains(v) {
            continue;
        }
        let mut comp = BTreeSet::from([v.to_string()]);
        let mut queue = VecDeque::from([v.to_string()]);
        seen.insert(v.to_string());
        while let Some(w) = queue.pop_front() {
            for u in g.neighbors(&w) {
                if !f.contains(u) && seen.insert(u.to_string()) {
                    comp.insert(u.to_string());
                    queue.push_back(u.to_string());
                }
            }
        }
        out.push(comp);
    }
    // Scanning vertices in order already yields least-vertex order.
    out
}
