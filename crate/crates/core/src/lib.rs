//! Bernoulli bond percolation on finite patches of transitive graphs.
//!
//! The crate is organised bottom-up: [`graph`] builds patches and their
//! deterministic geometry, [`percolation`] realises the monotone coupling and
//! cluster queries, [`estimators`] and [`ghost`] turn events into Monte Carlo
//! estimates, [`walks`] handles heat kernels and tube builders, and
//! [`multiscale`] holds the schedule bookkeeping. [`experiments`] wires
//! everything into configuration-driven runs used by the `perclab` binary.

pub mod error;
pub mod estimators;
pub mod experiments;
pub mod ghost;
pub mod graph;
pub mod multiscale;
pub mod percolation;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{GraphFamily, GraphPatch};
