//! Arrowhead placement for straight-line digraph drawings.
//!
//! Each edge gets a circular arrow near its target. Candidate arrow centers
//! are generated along the edge, candidates that overlap a vertex or another
//! edge are discarded, and a solver picks one candidate per edge so that as
//! few arrows as possible overlap, preferring candidates close to the target.

pub mod bench;
pub mod conflict;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod generate;
pub mod geom;
pub mod model;
pub mod pipeline;
pub mod posgen;
pub mod render;
pub mod solve;

pub use error::{Error, Result};
