//! Probabilistic refinement of entity-resolution results.
//!
//! A record set is described by a distribution over candidate partitions.
//! Pairwise "same entity?" questions are chosen under a token budget to
//! maximize the entropy of their joint answer, posed to a noisy oracle, and
//! the answers are folded back into the distribution by Bayes' rule.

pub mod error;
pub mod model;

pub use error::{Error, Result};
pub mod init;
pub mod select;
pub mod oracle;
pub mod refine;
pub mod app;
