//! Critical point estimation by bisection on per-replica critical labels.
//!
//! For an increasing event A, the configuration at p is in A exactly when the
//! replica's critical label T (the smallest label at which A occurs) is at
//! most p. One sorted pass over a replica's labels therefore prices every
//! probe of the bisection at once: P_p(A) is the fraction of replicas with T <= p.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::stats::{collect_replicas, wilson_interval, z_for_confidence};
use crate::graph::{BoxRegion, Graph, GraphFamily, GraphPatch};
use crate::percolation::rng::{self, Domain};
use crate::percolation::DisjointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PcCriterion {
    /// P_p(o <-> S_L) = theta.
    RootToSphere { theta: f64 },
    /// P_p(left-right crossing of the L x L box) = 1/2.
    BoxCrossing,
}

impl PcCriterion {
    /// Box crossing on planar lattices, root-to-sphere at 0.05 elsewhere.
    pub fn default_for(family: GraphFamily) -> PcCriterion {
        if family.is_planar() {
            PcCriterion::BoxCrossing
        } else {
            PcCriterion::RootToSphere { theta: 0.05 }
        }
    }

    pub fn target(&self) -> f64 {
        match *self {
            PcCriterion::RootToSphere { theta } => theta,
            PcCriterion::BoxCrossing => 0.5,
        }
    }
}

impl fmt::Display for PcCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcCriterion::RootToSphere { theta } => write!(f, "root_to_sphere({theta})"),
            PcCriterion::BoxCrossing => write!(f, "box_crossing"),
        }
    }
}

impl FromStr for PcCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "box_crossing" {
            return Ok(PcCriterion::BoxCrossing);
        }
        if s == "root_to_sphere" {
            return Ok(PcCriterion::RootToSphere { theta: 0.05 });
        }
        if let Some(arg) = s.strip_prefix("root_to_sphere(").and_then(|r| r.strip_suffix(')')) {
            let theta: f64 = arg.trim().parse().map_err(|_| Error::Parse(format!("bad threshold in '{s}'")))?;
            if !(theta > 0.0 && theta < 1.0) {
                return Err(Error::Parameter(format!("threshold must lie in (0,1), got {theta}")));
            }
            return Ok(PcCriterion::RootToSphere { theta });
        }
        Err(Error::Parse(format!("unknown criterion '{s}'")))
    }
}

/// A graph with two designated vertex sets whose connection is the event.
#[derive(Debug, Clone)]
pub struct CrossingProblem {
    graph: Graph,
    sources: Vec<usize>,
    targets: Vec<usize>,
}

const BUCKETS: usize = 256;

impl CrossingProblem {
    pub fn new(graph: Graph, sources: Vec<usize>, targets: Vec<usize>) -> Result<CrossingProblem> {
        if sources.is_empty() || targets.is_empty() {
            return Err(Error::Argument("crossing needs nonempty source and target sets".into()));
        }
        Ok(CrossingProblem { graph, sources, targets })
    }

    pub fn for_criterion(family: GraphFamily, scale: usize, criterion: PcCriterion) -> Result<CrossingProblem> {
        match criterion {
            PcCriterion::BoxCrossing => {
                let region = BoxRegion::build(family, scale)?;
                let (l, r) = (region.left().to_vec(), region.right().to_vec());
                CrossingProblem::new(region.graph().clone(), l, r)
            }
            PcCriterion::RootToSphere { .. } => {
                if scale == 0 {
                    return Err(Error::Parameter("sphere radius must be at least 1".into()));
                }
                let patch = GraphPatch::build(family, scale)?;
                let targets: Vec<usize> = patch.sphere(scale).collect();
                if targets.is_empty() {
                    return Err(Error::Parameter(format!("{family} has no vertices at distance {scale}")));
                }
                CrossingProblem::new(patch.graph().clone(), vec![patch.root()], targets)
            }
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The critical label of one replica: the smallest p at which the sources
    /// connect to the targets.
    pub fn threshold(&self, seed: u64, replica: u64) -> f64 {
        let n = self.graph.vertex_count();
        let (src, dst) = (n, n + 1);
        let mut d = DisjointSet::new(n + 2);
        for &s in &self.sources {
            d.union(s, src);
        }
        for &t in &self.targets {
            d.union(t, dst);
        }
        if d.same(src, dst) {
            return 0.0;
        }
        let m = self.graph.edge_count();
        let mut labels = vec![0.0f64; m];
        rng::fill_uniform(seed, Domain::EdgeLabels, replica, &mut labels);

        // Counting sort into label buckets; only buckets below the answer get sorted.
        let mut start = [0u32; BUCKETS + 1];
        for &x in &labels {
            start[(x * BUCKETS as f64) as usize + 1] += 1;
        }
        for b in 0..BUCKETS {
            start[b + 1] += start[b];
        }
        let mut fill = start;
        let mut order = vec![0u32; m];
        for (e, &x) in labels.iter().enumerate() {
            let b = (x * BUCKETS as f64) as usize;
            order[fill[b] as usize] = e as u32;
            fill[b] += 1;
        }
        for b in 0..BUCKETS {
            let slice = &mut order[start[b] as usize..start[b + 1] as usize];
            slice.sort_unstable_by(|&a, &c| labels[a as usize].total_cmp(&labels[c as usize]));
            for &e in slice.iter() {
                let (u, v) = self.graph.edge(e as usize);
                if d.union(u, v).is_some() && d.same(src, dst) {
                    return labels[e as usize];
                }
            }
        }
        f64::INFINITY
    }

    pub fn thresholds(&self, seed: u64, replicas: std::ops::Range<u64>) -> Vec<f64> {
        collect_replicas(replicas, |r| self.threshold(seed, r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcOptions {
    pub tolerance: f64,
    pub confidence: f64,
    /// Replicas drawn before the first probe; later batches double the sample.
    pub min_replicas: u64,
    pub max_replicas: u64,
}

impl Default for PcOptions {
    fn default() -> Self {
        PcOptions { tolerance: 0.01, confidence: 0.95, min_replicas: 400, max_replicas: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub p: f64,
    pub successes: u64,
    pub replicas: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    pub family: String,
    pub scale: usize,
    pub criterion: PcCriterion,
    pub p_hat: f64,
    pub bracket: (f64, f64),
    /// Replicas behind the final bracket (every probe reuses the same sample).
    pub replicas: u64,
    pub confidence: f64,
    pub seed: u64,
    /// Whether the bracket reached the tolerance before the replica cap.
    pub converged: bool,
    pub probes: Vec<Probe>,
}

/// Bisection on p over a growing sample of critical labels.
pub fn bisect_thresholds<F>(target: f64, options: &PcOptions, mut more: F) -> Result<(Vec<f64>, (f64, f64), bool, Vec<Probe>)>
where
    F: FnMut(std::ops::Range<u64>) -> Vec<f64>,
{
    if !(options.tolerance > 0.0) {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    if options.min_replicas == 0 || options.max_replicas < options.min_replicas {
        return Err(Error::Parameter("need 1 <= min_replicas <= max_replicas".into()));
    }
    let z = z_for_confidence(options.confidence)?;
    let mut sample = more(0..options.min_replicas);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut probes = Vec::new();
    let mut converged = true;
    while hi - lo > options.tolerance {
        let mid = 0.5 * (lo + hi);
        loop {
            let n = sample.len() as u64;
            let k = sample.iter().filter(|&&t| t <= mid).count() as u64;
            let (wl, wh) = wilson_interval(k, n, z);
            probes.push(Probe { p: mid, successes: k, replicas: n });
            if wh < target {
                lo = mid;
                break;
            }
            if wl > target {
                hi = mid;
                break;
            }
            if n >= options.max_replicas {
                converged = false;
                break;
            }
            let next = (2 * n).min(options.max_replicas);
            let extra = more(n..next);
            sample.extend(extra);
        }
        if !converged {
            break;
        }
    }
    Ok((sample, (lo, hi), converged, probes))
}

/// Empirical q-quantile of an unsorted sample.
fn quantile(sample: &[f64], q: f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_unstable_by(|a, b| a.total_cmp(b));
    let idx = ((q * s.len() as f64).ceil() as usize).clamp(1, s.len()) - 1;
    s[idx]
}

pub fn est_pc(
    family: GraphFamily,
    scale: usize,
    criterion: PcCriterion,
    options: &PcOptions,
    seed: u64,
) -> Result<PcEstimate> {
    let problem = CrossingProblem::for_criterion(family, scale, criterion)?;
    let target = criterion.target();
    let (sample, bracket, converged, probes) =
        bisect_thresholds(target, options, |range| problem.thresholds(seed, range))?;
    let p_hat = quantile(&sample, target).clamp(bracket.0, bracket.1);
    Ok(PcEstimate {
        family: family.to_string(),
        scale,
        criterion,
        p_hat,
        bracket,
        replicas: sample.len() as u64,
        confidence: options.confidence,
        seed,
        converged,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::{open_forest, EdgeLabels};

    #[test]
    fn threshold_is_first_crossing_label() {
        let problem = CrossingProblem::for_criterion(GraphFamily::HyperCubic(2), 6, PcCriterion::BoxCrossing).unwrap();
        for rep in 0..30 {
            let t = problem.threshold(4, rep);
            let labels = EdgeLabels::sample(problem.graph(), 4, rep);
            let crosses = |p: f64| {
                let mut d = open_forest(problem.graph(), &labels, p);
                problem.sources.iter().any(|&s| problem.targets.iter().any(|&t| d.same(s, t)))
            };
            assert!(crosses(t));
            assert!(!crosses(t - 1e-12));
        }
    }

    #[test]
    fn criterion_parsing() {
        assert_eq!("box_crossing".parse::<PcCriterion>().unwrap(), PcCriterion::BoxCrossing);
        assert_eq!(
            "root_to_sphere(0.1)".parse::<PcCriterion>().unwrap(),
            PcCriterion::RootToSphere { theta: 0.1 }
        );
        assert!("root_to_sphere(2)".parse::<PcCriterion>().is_err());
    }

    #[test]
    fn non_planar_box_rejected() {
        let err = est_pc(GraphFamily::HyperCubic(3), 8, PcCriterion::BoxCrossing, &PcOptions::default(), 1);
        assert!(matches!(err, Err(Error::Criterion(_))));
    }

    #[test]
    fn small_square_lattice_near_half() {
        let opts = PcOptions { tolerance: 0.02, min_replicas: 400, max_replicas: 4000, ..PcOptions::default() };
        let est = est_pc(GraphFamily::HyperCubic(2), 16, PcCriterion::BoxCrossing, &opts, 7).unwrap();
        assert!(est.bracket.0 <= est.p_hat && est.p_hat <= est.bracket.1);
        assert!((est.p_hat - 0.5).abs() < 0.04, "{est:?}");
    }
}
