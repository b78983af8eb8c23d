//! Maximum weight independent set in C4-free, prism-free perfect graphs of
//! bounded degree, via iterated even-set separators and exact submodular
//! function minimization.

pub mod bags;
pub mod dimacs;
pub mod generate;
pub mod graph;
pub mod recognition;
pub mod separator;
pub mod sfm;
pub mod solver;
pub mod stars;
pub mod vset;
pub mod weights;

pub use graph::{Graph, GraphError};
pub use vset::VertexSet;
pub use weights::Weights;
