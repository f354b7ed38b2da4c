//! Cone-cover algorithms: coverage decision, antichain partitions,
//! simultaneous refinement with strict descent, and closed-discrete kernel
//! certificates.
//!
//! Infinite branching is handled by the canonical-representative
//! convention: at an ALEPH edge only the child indices mentioned by the
//! inputs matter, plus one fresh index standing for all unmentioned
//! siblings (their subtrees are isomorphic and meet the same cones).
//! Coverage decisions are exact under this convention; emitted families
//! list the representative member literally.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::presentation::{
    canonical_sibling, check_unode, live_nodes, Multiplicity, NodeId, TreePresentation, UNode,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Cover,
    Partition,
}

/// Finite family of cones, given by the walks at their tips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFamily {
    pub members: Vec<UNode>,
    pub kind: FamilyKind,
}

impl ConeFamily {
    pub fn cover(members: Vec<UNode>) -> Self {
        ConeFamily { members, kind: FamilyKind::Cover }
    }
}

/// Outcome of a coverage decision; `escape` is the lexicographically least
/// live walk avoiding every member, present iff not covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCheck {
    pub covered: bool,
    pub escape: Option<UNode>,
}

/// Refined partition plus, for each member, the input part member strictly
/// below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub partition: ConeFamily,
    pub descent: BTreeMap<UNode, UNode>,
}

/// One kernel point: a normalized cone and the eventually-periodic ray
/// prefix chosen inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelRay {
    pub cone: UNode,
    pub ray_prefix: UNode,
}

/// Live children of the node `u` tagged `tag`. FIN edges list every child;
/// ALEPH edges list the indices used by `relevant` walks at this position
/// plus the canonical representative. Results are in (edge, child) order.
fn live_children(
    p: &TreePresentation,
    live: &[bool],
    u: &UNode,
    tag: NodeId,
    relevant: &[&UNode],
) -> Vec<(UNode, NodeId)> {
    let d = u.depth();
    let mut out = Vec::new();
    for (ord, e) in p.out_edges(tag) {
        if !live[e.dst.0] {
            continue;
        }
        match e.mult {
            Multiplicity::Fin(n) => {
                for c in 0..u64::from(n) {
                    out.push((u.child(ord, c), e.dst));
                }
            }
            Multiplicity::Aleph(_) => {
                let mentioned: BTreeSet<u64> = relevant
                    .iter()
                    .filter(|m| m.steps()[d].edge == ord)
                    .map(|m| m.steps()[d].child)
                    .collect();
                let canonical = canonical_sibling(mentioned.iter().copied());
                for c in mentioned.into_iter().chain([canonical]) {
                    out.push((u.child(ord, c), e.dst));
                }
            }
        }
    }
    out
}

/// Members of `relevant` that continue through the child step at depth
/// `d`; members at most `d` deep must have been handled as covering hits
/// before descending.
fn narrow<'a>(relevant: &[&'a UNode], d: usize, step: crate::presentation::Step) -> Vec<&'a UNode> {
    relevant.iter().copied().filter(|m| m.steps()[d] == step).collect()
}

fn first_escape(
    p: &TreePresentation,
    live: &[bool],
    u: &UNode,
    tag: NodeId,
    relevant: &[&UNode],
    depth_left: usize,
) -> Option<UNode> {
    if relevant.iter().any(|m| m.depth() == u.depth()) {
        return None;
    }
    if depth_left == 0 {
        return Some(u.clone());
    }
    let deeper: Vec<&UNode> = relevant.iter().copied().filter(|m| m.depth() > u.depth()).collect();
    for (child, ctag) in live_children(p, live, u, tag, &deeper) {
        let step = *child.steps().last().expect("child adds a step");
        let next = narrow(&deeper, u.depth(), step);
        if let Some(esc) = first_escape(p, live, &child, ctag, &next, depth_left - 1) {
            return Some(esc);
        }
    }
    None
}

/// Decides whether every ray passes through some member of `s`. On
/// failure, reports the least live walk (at the maximum member depth)
/// avoiding all of them.
pub fn cone_cover_check(p: &TreePresentation, s: &[UNode]) -> Result<CoverCheck> {
    for m in s {
        check_unode(p, m)?;
    }
    let live = live_nodes(p);
    let Some(root) = p.root().filter(|r| live[r.0]) else {
        return Ok(CoverCheck { covered: true, escape: None });
    };
    let depth = s.iter().map(UNode::depth).max().unwrap_or(0);
    let relevant: Vec<&UNode> = s.iter().collect();
    let escape = first_escape(p, &live, &UNode::root(), root, &relevant, depth);
    Ok(CoverCheck { covered: escape.is_none(), escape })
}

/// Drops duplicates and every member whose cone sits inside another
/// member's cone; the rest is an antichain that still covers.
pub fn antichain_normalize(p: &TreePresentation, s: &[UNode]) -> Result<ConeFamily> {
    let check = cone_cover_check(p, s)?;
    if !check.covered {
        return Err(Error::NotCovering {
            escape: check.escape.expect("uncovered check carries an escape").to_string(),
        });
    }
    let dedup: BTreeSet<&UNode> = s.iter().collect();
    let members: Vec<UNode> = dedup
        .iter()
        .filter(|t| !dedup.iter().any(|m| m.is_strict_prefix_of(t)))
        .map(|t| (*t).clone())
        .collect();
    Ok(ConeFamily { members, kind: FamilyKind::Partition })
}

fn assert_antichain(part: &[UNode]) -> Result<()> {
    for (i, a) in part.iter().enumerate() {
        for b in &part[i + 1..] {
            if a.is_prefix_of(b) || b.is_prefix_of(a) {
                return Err(Error::precondition(format!(
                    "partition members {a} and {b} are comparable"
                )));
            }
        }
    }
    Ok(())
}

fn refine_cones(
    p: &TreePresentation,
    live: &[bool],
    u: &UNode,
    tag: NodeId,
    cover: &[&UNode],
    out: &mut Vec<UNode>,
    max_depth: usize,
) {
    if cover.iter().any(|m| m.depth() <= u.depth()) {
        // Inside a single cover cone: the members were narrowed along the
        // walk, so a shallow survivor is a prefix of u.
        out.push(u.clone());
        return;
    }
    assert!(u.depth() <= max_depth, "covering cover stops the descent by its own depth");
    for (child, ctag) in live_children(p, live, u, tag, cover) {
        let step = *child.steps().last().expect("child adds a step");
        let next = narrow(cover, u.depth(), step);
        refine_cones(p, live, &child, ctag, &next, out, max_depth);
    }
}

/// Splits each partition cone into child cones and keeps splitting until
/// every piece lies inside one cover cone. Every output cone sits strictly
/// below its originating part member (recorded in `descent`), because the
/// first split happens unconditionally.
pub fn refine_partition(
    p: &TreePresentation,
    part: &ConeFamily,
    cover: &[UNode],
) -> Result<Refinement> {
    for m in part.members.iter().chain(cover) {
        check_unode(p, m)?;
    }
    assert_antichain(&part.members)?;
    let part_check = cone_cover_check(p, &part.members)?;
    if !part_check.covered {
        return Err(Error::NotCovering {
            escape: part_check.escape.expect("uncovered check carries an escape").to_string(),
        });
    }
    let cover_check = cone_cover_check(p, cover)?;
    if !cover_check.covered {
        return Err(Error::NotCovering {
            escape: cover_check.escape.expect("uncovered check carries an escape").to_string(),
        });
    }

    let live = live_nodes(p);
    let max_depth = cover.iter().map(UNode::depth).max().unwrap_or(0) + 1;
    let mut members = Vec::new();
    let mut descent = BTreeMap::new();
    for t in &part.members {
        let tag = check_unode(p, t).expect("validated above");
        if !live[tag.0] {
            // Empty cone: nothing to split, nothing to cover.
            continue;
        }
        let compatible: Vec<&UNode> = cover
            .iter()
            .filter(|m| {
                let d = m.depth().min(t.depth());
                m.steps()[..d] == t.steps()[..d]
            })
            .collect();
        // A compatible member at or above t already contains every child
        // cone, so one unconditional split suffices for strict descent.
        let inside_already = compatible.iter().any(|m| m.depth() <= t.depth());
        let steerers = narrowable(&compatible, t);
        let mut pieces = Vec::new();
        for (child, ctag) in live_children(p, &live, t, tag, &steerers) {
            if inside_already {
                pieces.push(child);
                continue;
            }
            let step = *child.steps().last().expect("child adds a step");
            let next = narrow(&steerers, t.depth(), step);
            refine_cones(p, &live, &child, ctag, &next, &mut pieces, max_depth);
        }
        for s in pieces {
            descent.insert(s.clone(), t.clone());
            members.push(s);
        }
    }
    members.sort();
    Ok(Refinement { partition: ConeFamily { members, kind: FamilyKind::Partition }, descent })
}

/// Cover members that can steer the split at `t`: those strictly deeper
/// (shallower compatible members already contain the whole cone and stop
/// the recursion right after the first split).
fn narrowable<'a>(compatible: &[&'a UNode], t: &UNode) -> Vec<&'a UNode> {
    compatible.iter().copied().filter(|m| m.depth() > t.depth()).collect()
}

/// Normalizes a covering neighborhood assignment and picks, in each
/// surviving cone, the least eventually-periodic ray prefix: extend by the
/// smallest edge ordinal with a live target (child 0) until a tag repeats.
pub fn d_kernel(p: &TreePresentation, assignment: &ConeFamily) -> Result<Vec<KernelRay>> {
    let normalized = antichain_normalize(p, &assignment.members)?;
    let live = live_nodes(p);
    let mut out = Vec::new();
    for cone in normalized.members {
        let mut tag = check_unode(p, &cone).expect("normalized members are legal");
        if !live[tag.0] {
            continue;
        }
        let mut ray = cone.clone();
        let mut seen = BTreeSet::from([tag]);
        loop {
            let (ord, e) = p
                .out_edges(tag)
                .find(|(_, e)| live[e.dst.0])
                .expect("live nodes have live successors");
            ray = ray.child(ord, 0);
            tag = e.dst;
            if !seen.insert(tag) {
                break;
            }
        }
        out.push(KernelRay { cone, ray_prefix: ray });
    }
    Ok(out)
}
