//! Cycle decompositions of balanced digraphs and heavy cycles in weighted
//! digraphs.
//!
//! The crate provides a multigraph type with stable edge ids, a seeded
//! random self-avoiding walk, a deterministic potential-guided walk, the
//! peeling driver that turns either walk into a full decomposition, graph
//! family generators, and exhaustive oracles for small instances.

mod error;

pub mod decompose;
pub mod format;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod potential;
pub mod random_walk;
pub mod view;
pub mod weighting;

pub use error::{Error, ParseError, Result};
pub use graph::{Arc, Cycle, Digraph, EdgeId, VertexId};
