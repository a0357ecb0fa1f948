//! Semi-streaming approximation algorithms for maximum path cover,
//! (1,2)-TSP and Max-TSP, together with a multi-pass stream simulator and
//! exact oracles for small instances.
//!
//! The path-cover algorithm computes an approximate maximum matching `M1`,
//! contracts it, and computes a second approximate matching `M2` in the
//! contracted graph; `M1 ∪ M2` is a set of vertex-disjoint paths with at
//! least `2/3·(1−ε)` of the optimum number of edges. The TSP algorithms
//! extend such path covers to tours.

pub mod contraction;
pub mod error;
pub mod graph;
pub mod matching;
pub mod oracles;
pub mod path_cover;
pub mod stream;
pub mod tsp;

pub use error::{Error, Result};
