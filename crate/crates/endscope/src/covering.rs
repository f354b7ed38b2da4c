//! Top-level decision procedures for covering properties of ray spaces,
//! consolidated into one report.

use serde::{Deserialize, Serialize};

use crate::derivatives::{derive, DerivOperator};
use crate::presentation::{live_nodes, CardinalSym, TreePresentation};
use crate::witnesses::{baire_witness, binary_witness, BairePatternPrefix, BinaryEmbeddingPrefix};

/// Sampling width used for the infinite-branching certificate attached to
/// reports.
pub const BAIRE_WITNESS_WIDTH: u64 = 3;

/// Verdicts for one presentation. The rank fields count derivative stages
/// to emptiness and are None when the fixpoint is nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyReport {
    /// The input was already identical to its prune.
    pub pruned: bool,
    /// The ray space has no points at all.
    pub empty: bool,
    pub compact: bool,
    pub lindelof_degree: CardinalSym,
    pub extent: CardinalSym,
    pub scattered: bool,
    pub rothberger: bool,
    pub menger: bool,
    pub sigma_compact: bool,
    pub scatter_rank: Option<usize>,
    pub kb_rank: Option<usize>,
}

/// A report plus the certificates that explain its failing properties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub report: PropertyReport,
    /// Present iff scattered is false.
    pub binary_witness: Option<BinaryEmbeddingPrefix>,
    /// Present iff menger is false while the degree stays countable; an
    /// uncountable degree is a cardinality obstruction, not a pattern.
    pub baire_witness: Option<BairePatternPrefix>,
}

/// True iff no ALEPH edge joins two live nodes: rays then branch finitely
/// everywhere.
pub fn is_compact(p: &TreePresentation) -> bool {
    let live = live_nodes(p);
    !p.edges().iter().any(|e| e.mult.is_aleph() && live[e.src.0] && live[e.dst.0])
}

/// Largest ALEPH(k) on a live-to-live edge, with an ALEPH(0) floor.
pub fn lindelof_degree(p: &TreePresentation) -> CardinalSym {
    let live = live_nodes(p);
    let max_k = p
        .edges()
        .iter()
        .filter(|e| live[e.src.0] && live[e.dst.0])
        .filter_map(|e| match e.mult {
            crate::presentation::Multiplicity::Aleph(k) => Some(k),
            crate::presentation::Multiplicity::Fin(_) => None,
        })
        .max()
        .unwrap_or(0);
    CardinalSym::Aleph(max_k)
}

/// The extent coincides with the Lindelöf degree on ray spaces.
pub fn extent(p: &TreePresentation) -> CardinalSym {
    lindelof_degree(p)
}

pub fn is_scattered(p: &TreePresentation) -> bool {
    derive(p, DerivOperator::Scatter).fixpoint_empty
}

pub fn is_rothberger(p: &TreePresentation) -> bool {
    lindelof_degree(p) == CardinalSym::Aleph(0) && is_scattered(p)
}

pub fn is_menger(p: &TreePresentation) -> bool {
    lindelof_degree(p) == CardinalSym::Aleph(0)
        && derive(p, DerivOperator::Compact).fixpoint_empty
}

/// Menger and σ-compact coincide on ray spaces.
pub fn is_sigma_compact(p: &TreePresentation) -> bool {
    is_menger(p)
}

/// Compact pieces exhausting the ray space, or None when the space is not
/// Menger. Piece k caps every ALEPH(0) multiplicity at FIN(k): under
/// Menger no ray crosses an infinite branch twice (a cycle through an
/// ALEPH edge would survive every derivative stage), so a ray whose
/// infinite-branch indices are all below k lies in piece k, and every ray
/// bounds its finitely many such indices.
pub fn sigma_cover(p: &TreePresentation, pieces: usize) -> Option<Vec<TreePresentation>> {
    if !is_menger(p) {
        return None;
    }
    Some(
        (1..=pieces)
            .map(|k| p.cap_aleph0(k as u32, &format!("{}-piece{k}", p.name())))
            .collect(),
    )
}

/// Runs every decision and attaches certificates for the failures that
/// have pattern explanations.
pub fn report(p: &TreePresentation, witness_depth: usize) -> Analysis {
    let scatter = derive(p, DerivOperator::Scatter);
    let kb = derive(p, DerivOperator::Compact);
    let live = live_nodes(p);
    let lindelof = lindelof_degree(p);
    let countable = lindelof == CardinalSym::Aleph(0);
    let scattered = scatter.fixpoint_empty;
    let menger = countable && kb.fixpoint_empty;
    let report = PropertyReport {
        pruned: live.iter().all(|&b| b),
        empty: !live.contains(&true),
        compact: is_compact(p),
        lindelof_degree: lindelof,
        extent: lindelof,
        scattered,
        rothberger: countable && scattered,
        menger,
        sigma_compact: menger,
        scatter_rank: scatter.rank(),
        kb_rank: kb.rank(),
    };
    Analysis {
        report,
        binary_witness: binary_witness(p, &scatter, witness_depth),
        baire_witness: if countable {
            baire_witness(p, &kb, witness_depth, BAIRE_WITNESS_WIDTH)
        } else {
            None
        },
    }
}
