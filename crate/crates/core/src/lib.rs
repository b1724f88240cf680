//! Structural calculus of bipartite–almost bipartite (BAB) graphs.
//!
//! The crate covers maximum matchings and the Gallai–Edmonds decomposition,
//! exact independence numbers and the critical-set invariants (ker, core,
//! nucleus, diadem, corona), BAB assembly and recognition, and exact
//! adjacency determinants through Sachs subgraphs. Every closed form has an
//! enumeration oracle next to it; the `verify` module runs them against each
//! other.

pub mod bab;
pub mod error;
pub mod fixtures;
pub mod flower;
pub mod gallai_edmonds;
pub mod graph;
pub mod independence;
pub mod matching;
pub mod oracle;
pub mod report;
pub mod search;
pub mod seed;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Cycle, CycleList, Graph, VertexSet};
pub use matching::Matching;
