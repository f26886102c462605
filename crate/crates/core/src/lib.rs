//! Extremal-graph-theory toolkit around blowups of spiders.
//!
//! * [`graph`]: bitset graphs, graph6 and JSON I/O, isomorphism.
//! * [`families`]: spiders, rooted trees, blowups, density and balancedness.
//! * [`exponent`]: exact exponent arithmetic and self-checking certificates.
//! * [`search`]: subgraph containment and exact Turán numbers for small `n`.
//! * [`classify`]: admissible, light and heavy paths and spiders, and the
//!   extraction procedures built on them.

pub mod classify;
pub mod error;
pub mod exponent;
pub mod families;
pub mod graph;
pub mod rational;
pub mod search;

pub use error::{Error, Result};
pub use graph::{is_isomorphic, Graph, VertexSet};
pub use rational::Rational;

/// Version tag carried by every JSON and CSV document this crate emits.
pub const SCHEMA: &str = "turan-lab/1";
