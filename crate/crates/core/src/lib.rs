//! Crystal cubic carbon graphs CCS(n) and their (edge) metric dimension.
//!
//! - [`graph`]: simple undirected graphs and BFS distances
//! - [`ccs`]: the CCS(n) family with its cube tree
//! - [`resolve`]: representations and resolvability checks
//! - [`solver`]: minimum resolving sets via hitting sets
//! - [`certify`]: reproducible checks of the dimension results
//! - [`formats`]: JSON, edge list, graph6 and DIMACS files

pub mod ccs;
pub mod certify;
pub mod cli;
pub mod formats;
pub mod graph;
pub mod resolve;
pub mod solver;

pub use ccs::{canonical_landmarks, expected_counts, generate_ccs, CcsGraph, UnitCubeLabeling};
pub use graph::{DistanceOracle, Edge, Graph, Vertex};
pub use resolve::{LandmarkSet, Variant};
