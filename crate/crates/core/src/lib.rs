//! Similarity measures for pairs of ranked search-result lists.
//!
//! Lists are compared three ways:
//!
//! - as **sets** of URLs or of document shingles ([`sets`]),
//! - as **rankings**, with weighted footrule and Kendall tau on partial
//!   lists ([`rank`]),
//! - as **term distributions**, with φ and nine other distances backed by
//!   permutation p-values ([`dist`]).
//!
//! [`normalize`] binds duplicate documents across two lists to one name
//! before any URL-based comparison, [`quality`] joins the measures with DCG,
//! [`sampling`] draws stratified query samples, and [`harness`] runs the
//! end-to-end experiments behind the `serpsim` binary.

pub mod corpus;
pub mod dist;
pub mod error;
pub mod harness;
pub mod normalize;
pub mod quality;
pub mod rank;
pub mod sampling;
pub mod sets;
pub mod text;

pub use error::{Error, Result};
