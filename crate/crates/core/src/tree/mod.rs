//! Equidistant trees, their topologies, NNI moves and Newick I/O.

mod equidistant;
mod leafset;
mod newick;
mod topology;

pub use equidistant::{is_generic_pair, EquidistantTree, VertexId};
pub use leafset::LeafSet;
pub use newick::{format_length, parse_newick, write_newick};
pub use topology::{
    nni_distance_exact, topology_equal_argmax, topology_equal_splits, Topology,
    NNI_BFS_MAX_LEAVES,
};
