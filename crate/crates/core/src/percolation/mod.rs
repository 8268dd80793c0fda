//! The monotone coupling of Bernoulli bond percolation and its events.

mod dump;
pub(crate) mod events;
mod forest;
mod labels;
pub mod rng;
mod sprinkle;

pub use dump::ConfigDump;
pub use events::{
    clusters, connected, open_forest, piv_event, piv_two_param, restricted_forest, two_ghost_event, wired_connected,
    VertexMask,
};
pub use forest::{ClusterForest, DisjointSet, Sweep};
pub use labels::{sample_labels, EdgeLabels, LazyLabels};
pub use sprinkle::{delta, sprinkle};
