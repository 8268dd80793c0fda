//! Bookkeeping for the multi-scale induction and desk-scale versions of its
//! measurable statements.

mod eval;
mod orange_peel;
mod schedule;

pub use eval::{
    eval_corridor, eval_full_space, full_space_threshold, hamming_bound_check, sample_ball, two_point_zone,
    well_separated_set, CorridorVerdict, FullSpaceVerdict, HammingCheck,
};
pub use orange_peel::{orange_peel_trace, PeelRow, PeelTrace};
pub use schedule::{make_schedule, p_infinity, Schedule};
