//! Named experiments driven by TOML configs, their records and reports.

mod config;
mod record;
mod report;
mod runner;

pub use config::ExperimentConfig;
pub use record::{read_records, Appender, ResultRecord, VERSION};
pub use report::{build_report, report, Report};
pub use runner::{exposed_counterexamples, load_and_run, run, run_and_write, spread_on_sphere};

/// Experiment names with a one-line description.
pub const EXPERIMENTS: &[(&str, &str)] = &[
    ("pc-estimate", "critical point by bisection on a growing sample of crossing thresholds"),
    ("locality-sweep", "thresholds along a family sequence, or sphere-connection decay on cylinders"),
    ("two-ghost-scaling", "two-ghost event probability against n on a log-log scale"),
    ("piv-decay", "two-arm probabilities Piv[m, n] against n"),
    ("cerf-check", "annulus two-arm bound against its right-hand side"),
    ("walk-checks", "exact heat-kernel bounds, escape bounds, entropy increments"),
    ("tubes-demo", "radial tube families, exposed-sphere crossings, ironing containments"),
    ("ghost-influence", "pivotal influences and Russo sums of a monotone event"),
    ("snowball-demo", "two-point chain along balls on a geodesic"),
    ("multiscale-demo", "schedule, its limit, full-space and two-point-zone evaluations"),
    ("orange-peel", "merge traces over a fixed seed set"),
];
