use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_events, McEstimate};
use crate::estimators::{est_piv, est_two_point};
use crate::ghost::field::{check_intensity, ghost_uniforms, ghosts_of, GhostStream};
use crate::graph::GraphPatch;
use crate::percolation::{restricted_forest, DisjointSet, EdgeLabels, VertexMask};

/// Smallest r >= 1 such that the upper confidence bound of P_p(Piv[1, floor(hr)])
/// is below h at p1, p2 and three interior points of [p1, p2].
pub fn default_gluing_radius(patch: &GraphPatch, p1: f64, p2: f64, h: f64, replicas: u64, seed: u64) -> Result<usize> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::Domain(format!("need 0 < h <= 1, got {h}")));
    }
    let grid: Vec<f64> = if p1 == p2 { vec![p1] } else { (0..5).map(|i| p1 + (p2 - p1) * i as f64 / 4.0).collect() };
    let mut verdict: HashMap<usize, bool> = HashMap::new();
    for r in 1.. {
        let n = (h * r as f64).floor() as usize;
        if n == 0 {
            continue;
        }
        if n > patch.radius() {
            return Err(Error::OutOfPatch { requested: n, radius: patch.radius() });
        }
        if let Some(&ok) = verdict.get(&n) {
            if ok {
                return Ok(r);
            }
            continue;
        }
        let mut ok = true;
        for &p in &grid {
            if est_piv(patch, p, 1, n, replicas, seed, None)?.estimate.upper() >= h {
                ok = false;
                break;
            }
        }
        verdict.insert(n, ok);
        if ok {
            return Ok(r);
        }
    }
    unreachable!()
}

#[derive(Debug, Clone)]
pub struct GluingEstimate {
    pub estimate: McEstimate,
    pub r: usize,
}

fn joined(d: &mut DisjointSet, inside: &VertexMask, a: &[usize], b: &[usize]) -> bool {
    a.iter().filter(|&&x| inside.contains(x)).any(|&x| b.iter().any(|&y| inside.contains(y) && d.same(x, y)))
}

/// Probability, on shared labels, that X meets the ghost field on A inside
/// B_r(Lambda) at p2 and Y meets it inside Lambda at p1, while X and Y are not
/// joined inside B_r(Lambda) at p2.
#[allow(clippy::too_many_arguments)]
pub fn gluing_event_prob(
    patch: &GraphPatch,
    p1: f64,
    p2: f64,
    h: f64,
    a: &[usize],
    x: &[usize],
    y: &[usize],
    lambda: &VertexMask,
    r: Option<usize>,
    replicas: u64,
    seed: u64,
) -> Result<GluingEstimate> {
    check_replicas(replicas)?;
    check_intensity(h)?;
    if p1 > p2 {
        return Err(Error::Parameter(format!("need p1 <= p2, got {p1} > {p2}")));
    }
    if a.is_empty() || x.is_empty() || y.is_empty() {
        return Err(Error::Argument("gluing sets must be nonempty".into()));
    }
    for &v in a.iter().chain(x).chain(y) {
        patch.check_vertex(v)?;
    }
    if h == 0.0 {
        // No ghosts, so the event is empty.
        return Ok(GluingEstimate { estimate: McEstimate::from_counts(0, replicas, seed, patch.radius()), r: r.unwrap_or(0) });
    }
    let r = match r {
        Some(r) => r,
        None => default_gluing_radius(patch, p1, p2, h, replicas, seed)?,
    };
    let n = patch.vertex_count();
    let outer = VertexMask::from_vertices(n, &patch.graph().neighbourhood(&lambda.vertices(), r));
    let k = count_events(replicas, |rep| {
        let ga = ghosts_of(a, &ghost_uniforms(seed, GhostStream::A, rep, n), h);
        if ga.is_empty() {
            return false;
        }
        let labels = EdgeLabels::sample(patch.graph(), seed, rep);
        let mut d2 = restricted_forest(patch.graph(), &labels, p2, Some(&outer));
        if !joined(&mut d2, &outer, x, &ga) || joined(&mut d2, &outer, x, y) {
            return false;
        }
        let mut d1 = restricted_forest(patch.graph(), &labels, p1, Some(lambda));
        joined(&mut d1, lambda, y, &ga)
    });
    Ok(GluingEstimate { estimate: McEstimate::from_counts(k, replicas, seed, patch.radius()), r })
}

#[derive(Debug, Clone)]
pub struct SnowballChain {
    /// Two-point estimate between the first and last balls at p2.
    pub lhs: McEstimate,
    pub tau_first: McEstimate,
    pub tau_last: McEstimate,
    /// Product of the within-ball two-point estimates at p1.
    pub rhs: f64,
    /// lhs / rhs, the empirical constant.
    pub ratio: f64,
}

/// Compares the end-to-end two-point function at p2 with the product of the
/// end balls' internal two-point functions at p1.
#[allow(clippy::too_many_arguments)]
pub fn snowball_chain(
    patch: &GraphPatch,
    p1: f64,
    p2: f64,
    centers: &[usize],
    b: usize,
    replicas: u64,
    seed: u64,
) -> Result<SnowballChain> {
    if centers.is_empty() {
        return Err(Error::Argument("need at least one center".into()));
    }
    if p1 > p2 {
        return Err(Error::Parameter(format!("need p1 <= p2, got {p1} > {p2}")));
    }
    let g = patch.graph();
    for &c in centers {
        patch.check_vertex(c)?;
    }
    for w in centers.windows(2) {
        let d = g.bfs_from(&[w[0]], |_| true)[w[1]];
        if d as usize > 2 * b + 1 {
            return Err(Error::Argument(format!(
                "centers {} and {} are {d} apart, more than 2b+1 = {}",
                w[0],
                w[1],
                2 * b + 1
            )));
        }
    }
    let first = g.neighbourhood(&[centers[0]], b);
    let last = g.neighbourhood(&[*centers.last().unwrap()], b);
    let lhs = est_two_point(patch, p2, &first, &last, None, replicas, seed)?;
    let tau_first = est_two_point(patch, p1, &first, &first, None, replicas, seed)?;
    let tau_last = est_two_point(patch, p1, &last, &last, None, replicas, seed)?;
    let rhs = tau_first.mean * tau_last.mean;
    let ratio = if rhs > 0.0 { lhs.mean / rhs } else { f64::INFINITY };
    Ok(SnowballChain { lhs, tau_first, tau_last, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn gluing_trivial() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 5).unwrap();
        let lambda = VertexMask::ball(&patch, 3);
        let a: Vec<usize> = patch.sphere(2).collect();
        let g = gluing_event_prob(&patch, 0.6, 1.0, 0.5, &a, &[0], &[3], &lambda, Some(1), 100, 1).unwrap();
        assert_eq!(g.estimate.mean, 0.0);
        let g = gluing_event_prob(&patch, 0.5, 0.6, 0.0, &a, &[0], &[3], &lambda, None, 100, 1).unwrap();
        assert_eq!(g.estimate.mean, 0.0);
    }

    #[test]
    fn chain_at_one() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 6).unwrap();
        let s = snowball_chain(&patch, 0.5, 1.0, &[0, 2, 6], 1, 50, 1).unwrap();
        assert_eq!(s.lhs.mean, 1.0);
        assert!(s.ratio >= 1.0);
        assert!(snowball_chain(&patch, 0.5, 0.6, &[0, 60], 1, 10, 1).is_err());
    }
}
