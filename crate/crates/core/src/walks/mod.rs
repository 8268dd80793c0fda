//! Lazy random walks, exact heat kernels on patches, ironing, and tubes.

mod checks;
mod coupling;
mod iron;
mod kernel;
mod tubes;
mod walk;

pub use checks::{
    cool_inequality_check, creases_check, kernel_decay_constant, vc_check, CoolReport, CoolRow, CreasesCheck,
    EscapeRow, KernelDecay, KernelRow, VcReport,
};
pub use coupling::{coupled_pair, coupled_pair_replica, CoupledPair};
pub use iron::{crease_times, iron, IronedPath};
pub use kernel::{entropy, heat_kernel_exact, kernel_sequence, tv_distance, WalkDistribution};
pub use tubes::{
    build_annular_tubes, build_radial_tubes, export_tubes, is_crossing, polylog_parameters, verify_plentiful,
    Construction, PlentifulCheck, TubeFamily, TubeMode,
};
pub use walk::{lazy_walk, lazy_walk_replica};
