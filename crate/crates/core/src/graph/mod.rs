//! Finite patches of infinite transitive graphs.

mod family;
mod geometry;
mod patch;
mod region;
mod text;

pub use family::{GraphFamily, Key};
pub use geometry::{
    boundary_ratio_scale, crossing_hits_exposed, exposed_sphere, geodesic, low_growth_scales, tube, BoundaryScale,
    ExposedSphere, TubeSpec,
};
pub use patch::{Graph, GraphPatch};
pub use region::BoxRegion;
pub use text::{export_patch, import_patch};
