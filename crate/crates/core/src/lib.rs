//! Tropical line segments between equidistant phylogenetic trees.
//!
//! Trees on `n` leaves are points of R^C(n,2) (ultrametrics). The tropical
//! segment between two of them passes through finitely many turning
//! points; at each one the tree topology either stays put, undergoes one
//! nearest-neighbour interchange, or undergoes a four-clade rearrangement.
//! This crate computes those segments exactly and classifies every turning
//! point, and provides the random-tree and counting machinery needed to
//! study how many turning points a random pair of trees produces.

pub mod ensembles;
pub mod error;
pub mod metric;
pub mod segment;
pub mod tree;

pub use error::{Error, Result};
pub use metric::{ExactScalar, PairIndex, ProjectivePoint, UltraVector};
pub use tree::{EquidistantTree, LeafSet, Topology, VertexId};
pub use ensembles::SeededStream;
pub use segment::{tropical_segment, TropicalSegment, TurningPoint, TurningPointClass};
