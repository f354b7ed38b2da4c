//! Decision procedures for covering properties of ray spaces of finitely
//! presented infinite trees, plus the finite-graph constructions (normal
//! spanning trees, edge-end clique transform) that feed them.
//!
//! A presentation is a finite pointed multigraph whose unfolding is an
//! infinite rooted tree of height at most ω. Everything downstream exploits
//! one closure property: the subtree above an unfolding node depends only on
//! the presentation node it is tagged with, so fixpoint computations on the
//! finite presentation decide properties of the infinite unfolding.
//!
//! Every decision path has an independent check: [`oracle`] re-derives
//! verdicts by literal brute force on explicit finite truncations, and
//! [`witnesses`] emits certificates that [`witnesses::verify_witness`]
//! validates against the raw unfolding order.

pub mod corpus;
pub mod covering;
pub mod derivatives;
mod error;
pub mod graphs;
pub mod oracle;
pub mod partitions;
pub mod presentation;
pub mod witnesses;
pub mod zoo;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
