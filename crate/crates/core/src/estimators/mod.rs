//! Monte Carlo estimators with confidence intervals.
//!
//! Replica `r` of an estimator run with seed `s` always sees the labels of
//! stream `(s, r)`, so estimators sharing a seed share their samples.

mod bounds;
mod corridor;
mod pc;
mod piv;
pub mod stats;
mod two_ghost;
mod two_point;

pub use bounds::path_counting_bound;
pub use corridor::{default_corridor_paths, est_corridor, CorridorEstimate};
pub use pc::{bisect_thresholds, est_pc, CrossingProblem, PcCriterion, PcEstimate, PcOptions, Probe};
pub use piv::{
    burnin_b, burnin_from_b, burnin_total, cerf_check, est_piv, floor_cbrt, BurninB, BurninTotal, CerfCheck,
    PivEstimate,
};
pub use stats::{fit_slope, wilson_interval, McEstimate, Method};
pub use two_ghost::{est_sphere_connection, est_two_ghost, root_edge};
#[allow(unused_imports)]
pub(crate) use two_ghost::{explore_pair, explore_pair_marked, ClusterPair};
pub use two_point::{est_pair_grid, est_two_point, PairGrid};
