//! Divisors on vertex-weighted multigraphs: chip-firing, reduced divisors,
//! rank, and distinguished representatives of divisor classes.

pub mod cli;
pub mod divisor;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod rank;
pub mod reduce;
pub mod reps;

pub use divisor::{Divisor, DivisorClass};
pub use error::{Error, Result};
pub use graph::{GraphBuilder, VertexSet, WeightedMultigraph};
pub use rank::{rank, RankOptions, RankReport};
