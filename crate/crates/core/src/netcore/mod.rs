//! Network representation, validation and structural analysis.

mod analysis;
mod network;

pub use analysis::{
    analyze, cycle_lengths_divisible_by, induced_subnetwork, is_clique, is_dag, levels,
    longest_path, predict_convergence, scc_decomposition, topological_order, Parity, Prediction,
    SccDecomposition, StructureReport,
};
pub use network::{Annotations, NetworkJson, NodeId, SocialNetwork, ValveAnnotation};
