use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_events, count_vector, fit_slope, McEstimate};
use crate::estimators::{explore_pair_marked, root_edge, ClusterPair};
use crate::ghost::field::{check_intensity, ghost_uniforms, ghosts_of, GhostStream};
use crate::graph::GraphPatch;
use crate::percolation::{connected, EdgeLabels, LazyLabels, VertexMask};

/// Estimate of the probability that a ghost on A (stream A) is joined inside
/// `lambda` to a ghost on B (stream B).
#[allow(clippy::too_many_arguments)]
pub fn est_ghost_connection(
    patch: &GraphPatch,
    p: f64,
    a: &[usize],
    b: &[usize],
    h: f64,
    lambda: Option<&VertexMask>,
    replicas: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_replicas(replicas)?;
    check_intensity(h)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("ghost supports must be nonempty".into()));
    }
    for &v in a.iter().chain(b) {
        patch.check_vertex(v)?;
    }
    let span = a.iter().chain(b).max().map_or(0, |&v| v + 1);
    let k = count_events(replicas, |r| {
        let ga = ghosts_of(a, &ghost_uniforms(seed, GhostStream::A, r, span), h);
        let gb = ghosts_of(b, &ghost_uniforms(seed, GhostStream::B, r, span), h);
        if ga.is_empty() || gb.is_empty() {
            return false;
        }
        let labels = EdgeLabels::sample(patch.graph(), seed, r);
        connected(patch, &labels, p, &ga, &gb, lambda).unwrap_or(false)
    });
    Ok(McEstimate::from_counts(k, replicas, seed, patch.radius()))
}

#[derive(Debug, Clone)]
pub struct TwoGhostCheck {
    /// Estimate at the requested intensity.
    pub lhs: McEstimate,
    /// C sqrt((1-p) h / p) with the fitted C.
    pub rhs: f64,
    /// Smallest C for which the bound holds at every swept intensity.
    pub constant: f64,
    pub sweep: Vec<(f64, McEstimate)>,
    /// Least-squares slope of log lhs against log h over the sweep.
    pub slope: Option<f64>,
}

fn coupled_rule(s: &ClusterPair) -> Option<bool> {
    if s.merged {
        return Some(false);
    }
    for c in 0..2 {
        if s.exhausted[c] && !s.hits[c] {
            return Some(false);
        }
    }
    for c in 0..2 {
        if s.exhausted[c] && !s.touches[c] && s.hits[c] && s.hits[1 - c] {
            return Some(true);
        }
    }
    if s.exhausted[0] && s.exhausted[1] {
        return Some(false);
    }
    if s.touches[0] && s.touches[1] {
        return Some(false);
    }
    None
}

/// Probability that the ends x, y of the first root edge lie in distinct
/// clusters, x's cluster meets ghost field A, y's meets ghost field B, and at
/// least one of the two clusters avoids the patch boundary. Evaluated at `h`
/// and at every intensity in `sweep` on the same replicas.
pub fn two_ghost_coupled_check(
    patch: &GraphPatch,
    p: f64,
    h: f64,
    sweep: &[f64],
    replicas: u64,
    seed: u64,
) -> Result<TwoGhostCheck> {
    check_replicas(replicas)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("need 0 < p <= 1, got {p}")));
    }
    let mut hs = vec![h];
    hs.extend_from_slice(sweep);
    for &x in &hs {
        check_intensity(x)?;
    }
    let e = root_edge(patch)?;
    let (x, y) = patch.graph().edge(e);
    let n = patch.vertex_count();
    let counts = count_vector(replicas, hs.len(), |r, acc| {
        let mut labels = LazyLabels::new(seed, r);
        if labels.is_open(e, p) {
            return;
        }
        let u = [ghost_uniforms(seed, GhostStream::A, r, n), ghost_uniforms(seed, GhostStream::B, r, n)];
        for (slot, &hh) in acc.iter_mut().zip(&hs) {
            if hh == 0.0 {
                continue;
            }
            if explore_pair_marked(patch, x, y, |f| labels.is_open(f, p), |c, v| u[c][v] < hh, coupled_rule) {
                *slot += 1;
            }
        }
    });
    let ests: Vec<McEstimate> =
        counts.iter().map(|&k| McEstimate::from_counts(k, replicas, seed, patch.radius())).collect();
    let scale = |hh: f64| ((1.0 - p) * hh / p).sqrt();
    let constant = hs
        .iter()
        .zip(&ests)
        .filter(|(&hh, _)| scale(hh) > 0.0)
        .map(|(&hh, est)| est.mean / scale(hh))
        .fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = sweep
        .iter()
        .zip(&ests[1..])
        .filter(|(&hh, est)| hh > 0.0 && est.mean > 0.0)
        .map(|(&hh, est)| (hh.ln(), est.mean.ln()))
        .collect();
    let slope = if pts.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        Some(fit_slope(&xs, &ys))
    } else {
        None
    };
    Ok(TwoGhostCheck {
        lhs: ests[0].clone(),
        rhs: constant * scale(h),
        constant,
        sweep: sweep.iter().copied().zip(ests[1..].iter().cloned()).collect(),
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn ghost_connection_trivial() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 3).unwrap();
        let all: Vec<usize> = (0..patch.vertex_count()).collect();
        assert_eq!(est_ghost_connection(&patch, 0.7, &all, &all, 0.0, None, 50, 1).unwrap().mean, 0.0);
        assert_eq!(est_ghost_connection(&patch, 1.0, &[0], &[20], 1.0, None, 50, 1).unwrap().mean, 1.0);
    }

    #[test]
    fn coupled_trivial() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 6).unwrap();
        assert_eq!(two_ghost_coupled_check(&patch, 1.0, 0.5, &[], 50, 1).unwrap().lhs.mean, 0.0);
        let c = two_ghost_coupled_check(&patch, 0.5, 0.0, &[0.25, 0.0625], 200, 1).unwrap();
        assert_eq!(c.lhs.mean, 0.0);
        assert!(c.sweep[0].1.mean > 0.0);
    }
}
