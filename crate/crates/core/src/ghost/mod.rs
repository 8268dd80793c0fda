//! Ghost fields and the sharp-threshold toolkit built on them.

mod connection;
pub mod events;
mod field;
mod gluing;

pub use connection::{est_ghost_connection, two_ghost_coupled_check, TwoGhostCheck};
pub use events::{est_pivotal_influence, est_pivotal_influence_graph, AtomKind, EventSpec, PivotalInfluence, VertexSet};
pub use field::{bits_encoding, sample_ghost, sample_ghost_replica, BitsEncoding, GhostField, GhostStream};
pub use gluing::{default_gluing_radius, gluing_event_prob, snowball_chain, GluingEstimate, SnowballChain};
