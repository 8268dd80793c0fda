use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_events, count_vector, McEstimate};
use crate::estimators::{default_corridor_paths, est_corridor, est_pair_grid};
use crate::graph::{low_growth_scales, GraphPatch};
use crate::percolation::{delta, restricted_forest, DisjointSet, EdgeLabels, VertexMask};

/// Balls up to this size are sampled exhaustively.
const EXHAUSTIVE: usize = 40;

/// exp(-(log log n)^{1/2}), read as 1 when log log n <= 0.
pub fn full_space_threshold(n: f64) -> f64 {
    (-(n.ln().ln().max(0.0)).sqrt()).exp()
}

/// Vertices of B_n used for pairwise estimates: all of them for small balls,
/// otherwise the first, middle and last vertex of each sphere.
pub fn sample_ball(patch: &GraphPatch, n: usize) -> Vec<usize> {
    if patch.ball(n).len() <= EXHAUSTIVE {
        return patch.ball(n).collect();
    }
    let mut out = Vec::new();
    for k in 0..=n {
        let s = patch.sphere(k);
        let mut picks = vec![s.start, s.start + s.len() / 2, s.end - 1];
        picks.dedup();
        out.extend(picks);
    }
    out
}

fn distinct_pairs(vs: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            out.push((u, v));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullSpaceVerdict {
    pub n: usize,
    pub threshold: f64,
    /// Smallest estimated connection probability over the sampled pairs.
    pub min: McEstimate,
    pub pair: (usize, usize),
    pub pairs_checked: usize,
    /// Whether every pair of B_n was checked.
    pub exhaustive: bool,
    pub holds: bool,
    /// The confidence interval lies on one side of the threshold.
    pub decisive: bool,
    pub margin: f64,
}

/// Desk-scale check of min over pairs in B_n of P_p(u <-> v) against the
/// threshold, on a deterministic sample of pairs.
pub fn eval_full_space(patch: &GraphPatch, n: usize, p: f64, replicas: u64, seed: u64) -> Result<FullSpaceVerdict> {
    check_replicas(replicas)?;
    patch.check_radius(n)?;
    let threshold = full_space_threshold(n as f64);
    let sample = sample_ball(patch, n);
    let pairs = distinct_pairs(&sample);
    if pairs.is_empty() {
        let min = McEstimate::exact(1.0, patch.radius());
        return Ok(FullSpaceVerdict {
            n,
            threshold,
            min,
            pair: (patch.root(), patch.root()),
            pairs_checked: 0,
            exhaustive: true,
            holds: true,
            decisive: true,
            margin: 1.0 - threshold,
        });
    }
    let grid = est_pair_grid(patch, p, &pairs, None, replicas, seed)?;
    let (u, v, min) = grid.min();
    let min = min.clone();
    Ok(FullSpaceVerdict {
        n,
        threshold,
        pair: (u, v),
        pairs_checked: pairs.len(),
        exhaustive: sample.len() == patch.ball(n).len(),
        holds: min.mean >= threshold,
        decisive: min.lower() >= threshold || min.upper() < threshold,
        margin: min.mean - threshold,
        min,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorridorVerdict {
    pub m: usize,
    /// Path lengths are capped at this value rather than exp((log m)^10).
    pub ell_cap: usize,
    pub estimate: McEstimate,
    pub threshold: f64,
    pub holds: bool,
}

/// For each low growth scale m in [n_prev, n], the corridor function at
/// (ell_cap, m) on the default path family, against the threshold at n.
#[allow(clippy::too_many_arguments)]
pub fn eval_corridor(
    patch: &GraphPatch,
    n_prev: usize,
    n: usize,
    p: f64,
    big_d: f64,
    ell_cap: usize,
    replicas: u64,
    seed: u64,
) -> Result<Vec<CorridorVerdict>> {
    check_replicas(replicas)?;
    let threshold = full_space_threshold(n as f64);
    let mut out = Vec::new();
    for m in low_growth_scales(patch, big_d, n)?.into_iter().filter(|&m| m >= n_prev) {
        let paths = default_corridor_paths(patch, ell_cap, Some(m));
        let est = est_corridor(patch, p, ell_cap, Some(m), &paths, replicas, seed)?;
        out.push(CorridorVerdict {
            m,
            ell_cap,
            holds: est.estimate.mean >= threshold,
            estimate: est.estimate,
            threshold,
        });
    }
    Ok(out)
}

/// Largest r <= m such that every sampled pair of B_r connects inside B_m with
/// lower confidence bound at least 1 / log n.
pub fn two_point_zone(patch: &GraphPatch, p: f64, m: usize, n: f64, replicas: u64, seed: u64) -> Result<usize> {
    check_replicas(replicas)?;
    patch.check_radius(m)?;
    if !(n > 1.0) {
        return Err(Error::Domain(format!("threshold scale must exceed 1, got {n}")));
    }
    let thr = 1.0 / n.ln();
    let sample = sample_ball(patch, m);
    let pairs = distinct_pairs(&sample);
    if pairs.is_empty() {
        return Ok(m);
    }
    let mask = VertexMask::ball(patch, m);
    let grid = est_pair_grid(patch, p, &pairs, Some(&mask), replicas, seed)?;
    // worst[r]: smallest lower bound over pairs whose farther end is at distance r.
    let mut worst = vec![f64::INFINITY; m + 1];
    for (&(u, v), e) in grid.pairs.iter().zip(&grid.estimates) {
        let r = patch.dist(u).max(patch.dist(v));
        worst[r] = worst[r].min(e.lower());
    }
    let mut zone = 0;
    let mut running = f64::INFINITY;
    for (r, &w) in worst.iter().enumerate() {
        running = running.min(w);
        if running < thr {
            break;
        }
        zone = r;
    }
    Ok(zone)
}

/// Shortest path from u to v using only vertices of B_zone, smallest index first.
fn geodesic_in_ball(patch: &GraphPatch, u: usize, v: usize, zone: usize) -> Result<Vec<usize>> {
    let end = patch.ball(zone).end;
    let g = patch.graph();
    let dist = g.bfs_from(&[v], |w| w < end);
    if dist[u] == u32::MAX {
        return Err(Error::Argument(format!("{u} and {v} are not joined inside B_{zone}")));
    }
    let mut path = vec![u];
    let mut cur = u;
    while cur != v {
        cur = g
            .neighbors(cur)
            .iter()
            .map(|&(w, _)| w as usize)
            .filter(|&w| w < end && dist[w] + 1 == dist[cur])
            .min()
            .expect("bfs layers are consistent");
        path.push(cur);
    }
    Ok(path)
}

/// Greedy selection along a geodesic from u to v inside B_zone. From the last
/// selected vertex, the next one follows the last geodesic vertex whose
/// connection inside B_{m/2} might still reach the threshold (log n)^{-theta}
/// (upper confidence bound). The final vertex v is always selected.
#[allow(clippy::too_many_arguments)]
pub fn well_separated_set(
    patch: &GraphPatch,
    p1: f64,
    m: usize,
    n: f64,
    theta: f64,
    zone: usize,
    u: usize,
    v: usize,
    replicas: u64,
    seed: u64,
) -> Result<Vec<usize>> {
    check_replicas(replicas)?;
    patch.check_radius(m / 2)?;
    patch.check_radius(zone)?;
    if !(n > 1.0) {
        return Err(Error::Domain(format!("threshold scale must exceed 1, got {n}")));
    }
    for x in [u, v] {
        patch.check_vertex(x)?;
        if patch.dist(x) > zone {
            return Err(Error::Argument(format!("vertex {x} lies outside B_{zone}")));
        }
    }
    let thr = n.ln().powf(-theta);
    let gamma = geodesic_in_ball(patch, u, v, zone)?;
    let len = gamma.len() - 1;
    let mask = VertexMask::ball(patch, m / 2);
    let mut out = vec![gamma[0]];
    let mut i = 0;
    while i < len {
        let pairs: Vec<(usize, usize)> = (i + 1..=len).map(|j| (gamma[i], gamma[j])).collect();
        let grid = est_pair_grid(patch, p1, &pairs, Some(&mask), replicas, seed)?;
        let last_high = grid.estimates.iter().rposition(|e| e.upper() >= thr).map(|k| k + i + 1).unwrap_or(i);
        i = (last_high + 1).min(len);
        out.push(gamma[i]);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HammingCheck {
    /// Estimate of P_q(A <-> B).
    pub lhs: McEstimate,
    /// 1 - exp(-delta(p,q) theta |A|).
    pub rhs: f64,
    pub theta: f64,
    /// Estimated min over x in A of P_p(x <-> B).
    pub min_to_b: f64,
    /// Estimated 2|A| max over distinct x, y in A of P_p(x <-> y).
    pub pair_term: f64,
    pub hypothesis_met: bool,
    /// lhs >= rhs up to the confidence half-width. The bound is only
    /// guaranteed when `hypothesis_met`.
    pub holds: bool,
}

pub fn hamming_bound_check(
    patch: &GraphPatch,
    p: f64,
    q: f64,
    a: &[usize],
    b: &[usize],
    replicas: u64,
    seed: u64,
) -> Result<HammingCheck> {
    check_replicas(replicas)?;
    if !(p < q) {
        return Err(Error::Domain(format!("need p < q, got {p}, {q}")));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("A and B must be nonempty".into()));
    }
    for &x in a.iter().chain(b) {
        patch.check_vertex(x)?;
    }
    let g = patch.graph();
    let hits_b = |forest: &mut DisjointSet, x: usize| b.iter().any(|&y| forest.same(x, y));

    // P_p(x <-> B) for each x in A and P_p(x <-> y) for distinct pairs, on shared labels.
    let pairs = distinct_pairs(a);
    let counts = count_vector(replicas, a.len() + pairs.len(), |r, acc| {
        let labels = EdgeLabels::sample(g, seed, r);
        let mut forest = restricted_forest(g, &labels, p, None);
        for (i, &x) in a.iter().enumerate() {
            if hits_b(&mut forest, x) {
                acc[i] += 1;
            }
        }
        for (k, &(x, y)) in pairs.iter().enumerate() {
            if forest.same(x, y) {
                acc[a.len() + k] += 1;
            }
        }
    });
    let freq = |k: u64| k as f64 / replicas as f64;
    let min_to_b = counts[..a.len()].iter().map(|&k| freq(k)).fold(f64::INFINITY, f64::min);
    let max_pair = counts[a.len()..].iter().map(|&k| freq(k)).fold(0.0, f64::max);
    let pair_term = 2.0 * a.len() as f64 * max_pair;
    let theta = min_to_b.min(pair_term);
    let hypothesis_met = min_to_b >= pair_term && theta > 0.0 && theta < 1.0;

    let hits = count_events(replicas, |r| {
        let labels = EdgeLabels::sample(g, seed, r);
        let mut forest = restricted_forest(g, &labels, q, None);
        a.iter().any(|&x| hits_b(&mut forest, x))
    });
    let lhs = McEstimate::from_counts(hits, replicas, seed, patch.radius());
    // delta(p, q) is infinite when q = 1 or p = 0.
    let dpq = if q >= 1.0 || p <= 0.0 { f64::INFINITY } else { delta(p, q)? };
    let rhs = if theta > 0.0 { -f64::exp_m1(-dpq * theta * a.len() as f64) } else { 0.0 };
    let holds = lhs.upper() >= rhs;
    Ok(HammingCheck { lhs, rhs, theta, min_to_b, pair_term, hypothesis_met, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn z2(r: usize) -> GraphPatch {
        GraphPatch::build(GraphFamily::HyperCubic(2), r).unwrap()
    }

    #[test]
    fn full_space_extremes() {
        let patch = z2(6);
        assert!(eval_full_space(&patch, 4, 1.0, 20, 1).unwrap().holds);
        assert!(!eval_full_space(&patch, 4, 0.0, 20, 1).unwrap().holds);
    }

    #[test]
    fn zone_extremes() {
        let patch = z2(8);
        assert_eq!(two_point_zone(&patch, 1.0, 5, 1e6, 50, 2).unwrap(), 5);
        assert_eq!(two_point_zone(&patch, 0.0, 5, 1e6, 50, 2).unwrap(), 0);
    }

    #[test]
    fn separated_extremes() {
        let patch = z2(10);
        let v = patch.sphere(4).start;
        let all = well_separated_set(&patch, 0.0, 10, 1e6, 1.0, 4, 0, v, 400, 3).unwrap();
        assert_eq!(all.len(), 5);
        let ends = well_separated_set(&patch, 1.0, 10, 1e6, 1.0, 4, 0, v, 20, 3).unwrap();
        assert_eq!(ends, vec![0, v]);
        assert!(well_separated_set(&patch, 0.5, 10, 1e6, 1.0, 3, 0, v, 20, 3).is_err());
    }

    #[test]
    fn hamming_at_one() {
        let patch = z2(6);
        let a: Vec<usize> = patch.sphere(2).collect();
        let b: Vec<usize> = patch.sphere(6).collect();
        let chk = hamming_bound_check(&patch, 0.5, 1.0, &a, &b, 40, 1).unwrap();
        assert_eq!(chk.lhs.mean, 1.0);
        assert!(chk.lhs.mean >= chk.rhs);
    }
}
