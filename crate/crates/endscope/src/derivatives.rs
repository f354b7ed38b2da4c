//! Derivative fixpoints on presentations.
//!
//! Both operators repeatedly delete "trivial" nodes from the live set until
//! nothing changes. Because the subtree above an unfolding node depends only
//! on its presentation tag, the per-tag computation decides the literal
//! per-unfolding-node definition exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::presentation::{live_node_set, Multiplicity, NodeId, TreePresentation};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOperator {
    /// Deletes nodes whose subtree is a chain (no branching anywhere above).
    Scatter,
    /// Deletes nodes whose subtree has no infinite branching anywhere above.
    Compact,
}

impl DerivOperator {
    pub fn label(self) -> &'static str {
        match self {
            DerivOperator::Scatter => "scatter",
            DerivOperator::Compact => "compact",
        }
    }
}

/// Full removal history of a derivative run. Stages strictly shrink, except
/// that a nonempty fixpoint repeats its final stage once so the stall is
/// visible in the record.
#[derive(Debug, Clone)]
pub struct DerivativeTrace {
    pub operator: DerivOperator,
    pub stages: Vec<BTreeSet<NodeId>>,
    pub fixpoint_empty: bool,
    /// Stage at which a node was removed; absent for fixpoint members.
    pub rank_of: BTreeMap<NodeId, usize>,
}

impl DerivativeTrace {
    /// Stage count to emptiness; None when a nonempty fixpoint remains.
    pub fn rank(&self) -> Option<usize> {
        self.fixpoint_empty.then(|| self.stages.len() - 1)
    }

    pub fn fixpoint(&self) -> &BTreeSet<NodeId> {
        self.stages.last().expect("a trace always has at least one stage")
    }
}

/// True iff the unfolding above any node tagged `v`, restricted to tags in
/// `s`, is a chain. Deterministic walk: follow lone FIN(1) edges into `s`
/// until a dead end or a revisit; any branching shape ends the walk with
/// false.
pub fn is_chain_above(p: &TreePresentation, v: NodeId, s: &BTreeSet<NodeId>) -> Result<bool> {
    if !s.contains(&v) {
        return Err(Error::precondition(format!(
            "node {} is outside the stage set",
            p.node_name(v)
        )));
    }
    let mut seen = BTreeSet::new();
    let mut cur = v;
    loop {
        if !seen.insert(cur) {
            return Ok(true);
        }
        let into_s: Vec<&crate::presentation::Edge> =
            p.out_edges(cur).map(|(_, e)| e).filter(|e| s.contains(&e.dst)).collect();
        match into_s.as_slice() {
            [] => return Ok(true),
            [e] if e.mult == Multiplicity::Fin(1) => cur = e.dst,
            _ => return Ok(false),
        }
    }
}

/// True iff no node reachable from `v` inside `s` (including `v`) has an
/// ALEPH edge back into `s`.
pub fn is_compactly_trivial(p: &TreePresentation, v: NodeId, s: &BTreeSet<NodeId>) -> Result<bool> {
    if !s.contains(&v) {
        return Err(Error::precondition(format!(
            "node {} is outside the stage set",
            p.node_name(v)
        )));
    }
    let mut seen = BTreeSet::from([v]);
    let mut queue = vec![v];
    while let Some(u) = queue.pop() {
        for (_, e) in p.out_edges(u) {
            if s.contains(&e.dst) {
                if e.mult.is_aleph() {
                    return Ok(false);
                }
                if seen.insert(e.dst) {
                    queue.push(e.dst);
                }
            }
        }
    }
    Ok(true)
}

/// Runs the operator to its fixpoint, starting from the live node set.
pub fn derive(p: &TreePresentation, operator: DerivOperator) -> DerivativeTrace {
    let mut stages = vec![live_node_set(p)];
    let mut rank_of = BTreeMap::new();
    let fixpoint_empty = loop {
        let cur = stages.last().expect("nonempty");
        if cur.is_empty() {
            break true;
        }
        let stage = stages.len() - 1;
        let next: BTreeSet<NodeId> = cur
            .iter()
            .copied()
            .filter(|&v| {
                let trivial = match operator {
                    DerivOperator::Scatter => is_chain_above(p, v, cur),
                    DerivOperator::Compact => is_compactly_trivial(p, v, cur),
                }
                .expect("stage members are inside the stage");
                !trivial
            })
            .collect();
        for v in cur.iter().copied().filter(|v| !next.contains(v)) {
            rank_of.insert(v, stage);
        }
        let stalled = next.len() == cur.len();
        stages.push(next);
        if stalled {
            break false;
        }
    };
    DerivativeTrace { operator, stages, fixpoint_empty, rank_of }
}

/// Stage count to emptiness under the operator; None when the fixpoint is
/// nonempty.
pub fn rank(p: &TreePresentation, operator: DerivOperator) -> Option<usize> {
    derive(p, operator).rank()
}

/// JSON form of a trace: node names per stage, null rank on a nonempty
/// fixpoint.
pub fn trace_to_json(p: &TreePresentation, trace: &DerivativeTrace) -> serde_json::Value {
    let stages: Vec<Vec<&str>> = trace
        .stages
        .iter()
        .map(|s| s.iter().map(|&v| p.node_name(v)).collect())
        .collect();
    json!({
        "operator": trace.operator.label(),
        "stages": stages,
        "rank": trace.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn names(p: &TreePresentation, s: &BTreeSet<NodeId>) -> Vec<String> {
        s.iter().map(|&v| p.node_name(v).to_string()).collect()
    }

    fn stage_names(p: &TreePresentation, t: &DerivativeTrace) -> Vec<Vec<String>> {
        t.stages.iter().map(|s| names(p, s)).collect()
    }

    #[test]
    fn comb_scatter_trace() {
        let p = zoo::comb();
        let t = derive(&p, DerivOperator::Scatter);
        assert_eq!(
            stage_names(&p, &t),
            vec![vec!["c".to_string(), "s".to_string()], vec!["s".to_string()], vec![]]
        );
        assert!(t.fixpoint_empty);
        assert_eq!(t.rank(), Some(2));
        let c = p.node_id("c").unwrap();
        let s = p.node_id("s").unwrap();
        assert_eq!(t.rank_of.get(&c), Some(&0));
        assert_eq!(t.rank_of.get(&s), Some(&1));
    }

    #[test]
    fn bin_traces() {
        let p = zoo::bin();
        let t = derive(&p, DerivOperator::Scatter);
        assert_eq!(stage_names(&p, &t), vec![vec!["v".to_string()], vec!["v".to_string()]]);
        assert!(!t.fixpoint_empty);
        assert_eq!(t.rank(), None);
        assert!(t.rank_of.is_empty());

        let t = derive(&p, DerivOperator::Compact);
        assert_eq!(stage_names(&p, &t), vec![vec!["v".to_string()], vec![]]);
        assert_eq!(t.rank(), Some(1));
    }

    #[test]
    fn star_traces() {
        let p = zoo::star();
        for op in [DerivOperator::Scatter, DerivOperator::Compact] {
            let t = derive(&p, op);
            assert_eq!(
                stage_names(&p, &t),
                vec![vec!["c".to_string(), "r".to_string()], vec!["r".to_string()], vec![]]
            );
            assert_eq!(t.rank(), Some(2));
        }
    }

    #[test]
    fn baire_traces() {
        let p = zoo::baire();
        for op in [DerivOperator::Scatter, DerivOperator::Compact] {
            let t = derive(&p, op);
            assert_eq!(stage_names(&p, &t), vec![vec!["v".to_string()], vec!["v".to_string()]]);
            assert!(!t.fixpoint_empty);
        }
    }

    #[test]
    fn single_loop_traces() {
        let p = zoo::single_loop();
        for op in [DerivOperator::Scatter, DerivOperator::Compact] {
            let t = derive(&p, op);
            assert_eq!(t.rank(), Some(1));
        }
    }

    #[test]
    fn double_fan_compact_trace() {
        let p = zoo::double_fan();
        let t = derive(&p, DerivOperator::Compact);
        assert_eq!(
            stage_names(&p, &t),
            vec![
                vec!["a".to_string(), "b".to_string(), "c".to_string()],
                vec!["a".to_string(), "b".to_string()],
                vec!["a".to_string()],
                vec![],
            ]
        );
        assert_eq!(t.rank(), Some(3));
    }

    #[test]
    fn uncountable_star_compact_empties() {
        let t = derive(&zoo::uncountable_star(), DerivOperator::Compact);
        assert!(t.fixpoint_empty);
        assert_eq!(t.rank(), Some(2));
    }

    #[test]
    fn empty_presentation_trace() {
        let p = TreePresentation::empty("none");
        for op in [DerivOperator::Scatter, DerivOperator::Compact] {
            let t = derive(&p, op);
            assert_eq!(t.stages.len(), 1);
            assert!(t.fixpoint_empty);
            assert_eq!(t.rank(), Some(0));
        }
    }

    #[test]
    fn walk_tests_error_outside_stage() {
        let p = zoo::comb();
        let only_s: BTreeSet<NodeId> = [p.node_id("s").unwrap()].into();
        let c = p.node_id("c").unwrap();
        assert!(is_chain_above(&p, c, &only_s).is_err());
        assert!(is_compactly_trivial(&p, c, &only_s).is_err());
    }

    #[test]
    fn trace_json_shape() {
        let p = zoo::comb();
        let t = derive(&p, DerivOperator::Scatter);
        let v = trace_to_json(&p, &t);
        assert_eq!(v["operator"], "scatter");
        assert_eq!(v["rank"], 2);
        assert_eq!(v["stages"][0], serde_json::json!(["c", "s"]));
        assert_eq!(v["stages"][2], serde_json::json!([]));

        let p = zoo::bin();
        let t = derive(&p, DerivOperator::Scatter);
        let v = trace_to_json(&p, &t);
        assert!(v["rank"].is_null());
    }

    #[test]
    fn removal_is_upward_hereditary() {
        // If v was removed at stage i, every node reachable only through v
        // is gone by then too; concretely each stage is closed under the
        // walk tests used to compute it. Checked on the zoo.
        for p in [zoo::comb(), zoo::star(), zoo::double_fan(), zoo::uncountable_star()] {
            for op in [DerivOperator::Scatter, DerivOperator::Compact] {
                let t = derive(&p, op);
                for win in t.stages.windows(2) {
                    assert!(win[1].is_subset(&win[0]));
                }
            }
        }
    }
}
