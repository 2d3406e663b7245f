//! Counting and estimating small subgraph counts from vertex-sampled graphs.

pub mod acceptance;
pub mod canon;
pub mod count;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod motif;
pub mod sampling;
pub mod theory;

pub use error::{Error, Result};
pub use graph::Graph;
pub use motif::Motif;
