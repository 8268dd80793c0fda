use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_events, McEstimate};
use crate::graph::GraphPatch;
use crate::percolation::LazyLabels;

/// Outcome of exploring the two clusters at the ends of a closed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ClusterPair {
    pub merged: bool,
    pub size: [usize; 2],
    pub touches: [bool; 2],
    pub exhausted: [bool; 2],
    /// Whether each cluster contains a vertex accepted by the marker.
    pub hits: [bool; 2],
}

/// Explores the open clusters of `x` and `y` in lockstep, one vertex at a
/// time, and stops as soon as `decide` returns an answer for the partial state.
pub(crate) fn explore_pair<F, D>(patch: &GraphPatch, x: usize, y: usize, open: F, decide: D) -> bool
where
    F: FnMut(usize) -> bool,
    D: FnMut(&ClusterPair) -> Option<bool>,
{
    explore_pair_marked(patch, x, y, open, |_, _| false, decide)
}

/// As [`explore_pair`], with `mark(side, v)` flagging special vertices.
pub(crate) fn explore_pair_marked<F, M, D>(
    patch: &GraphPatch,
    x: usize,
    y: usize,
    mut open: F,
    mut mark: M,
    mut decide: D,
) -> bool
where
    F: FnMut(usize) -> bool,
    M: FnMut(usize, usize) -> bool,
    D: FnMut(&ClusterPair) -> Option<bool>,
{
    let g = patch.graph();
    let mut owner = vec![0u8; patch.vertex_count()];
    let mut queues = [vec![x], vec![y]];
    let mut heads = [0usize; 2];
    owner[x] = 1;
    owner[y] = 2;
    let mut st = ClusterPair {
        merged: false,
        size: [1, 1],
        touches: [patch.is_boundary(x), patch.is_boundary(y)],
        exhausted: [false, false],
        hits: [mark(0, x), mark(1, y)],
    };
    let mut turn = 0;
    loop {
        if let Some(ans) = decide(&st) {
            return ans;
        }
        // Alternate, skipping an exhausted side.
        let c = if st.exhausted[turn] { 1 - turn } else { turn };
        turn = 1 - turn;
        if heads[c] == queues[c].len() {
            st.exhausted[c] = true;
            continue;
        }
        let u = queues[c][heads[c]];
        heads[c] += 1;
        for &(w, e) in g.neighbors(u) {
            let w = w as usize;
            if owner[w] == c as u8 + 1 || !open(e as usize) {
                continue;
            }
            if owner[w] != 0 {
                st.merged = true;
                return decide(&st).unwrap_or(false);
            }
            owner[w] = c as u8 + 1;
            queues[c].push(w);
            st.size[c] += 1;
            st.touches[c] |= patch.is_boundary(w);
            if !st.hits[c] {
                st.hits[c] = mark(c, w);
            }
        }
        if heads[c] == queues[c].len() {
            st.exhausted[c] = true;
        }
    }
}

/// Decision rule for the two-ghost event with size threshold n.
pub(crate) fn two_ghost_rule(n: usize) -> impl FnMut(&ClusterPair) -> Option<bool> {
    move |s: &ClusterPair| {
        if s.merged {
            return Some(false);
        }
        for c in 0..2 {
            if s.exhausted[c] && s.size[c] < n {
                return Some(false);
            }
        }
        let big = |c: usize| s.size[c] >= n;
        let finished_finite = |c: usize| s.exhausted[c] && !s.touches[c];
        for c in 0..2 {
            let o = 1 - c;
            if finished_finite(c) && big(c) && big(o) {
                return Some(true);
            }
        }
        if s.exhausted[0] && s.exhausted[1] {
            return Some(big(0) && big(1) && (!s.touches[0] || !s.touches[1]));
        }
        if s.touches[0] && s.touches[1] {
            return Some(false);
        }
        None
    }
}

/// The root-incident edge used for the two-ghost event.
pub fn root_edge(patch: &GraphPatch) -> Result<usize> {
    patch
        .graph()
        .neighbors(patch.root())
        .first()
        .map(|&(_, e)| e as usize)
        .ok_or_else(|| Error::Argument("patch has no edge at the root".into()))
}

/// Estimate of P_p(S_{e,n}) for the first edge at the root.
pub fn est_two_ghost(patch: &GraphPatch, p: f64, n: usize, replicas: u64, seed: u64) -> Result<McEstimate> {
    check_replicas(replicas)?;
    if n == 0 {
        return Err(Error::Argument("cluster size threshold must be at least 1".into()));
    }
    let e = root_edge(patch)?;
    let (x, y) = patch.graph().edge(e);
    let k = count_events(replicas, |r| {
        let mut labels = LazyLabels::new(seed, r);
        if labels.is_open(e, p) {
            return false;
        }
        explore_pair(patch, x, y, |f| labels.is_open(f, p), two_ghost_rule(n))
    });
    Ok(McEstimate::from_counts(k, replicas, seed, patch.radius()))
}

/// Estimate of P_p(o <-> S_r).
pub fn est_sphere_connection(patch: &GraphPatch, p: f64, r: usize, replicas: u64, seed: u64) -> Result<McEstimate> {
    check_replicas(replicas)?;
    patch.check_radius(r)?;
    let g = patch.graph();
    let k = count_events(replicas, |rep| {
        if r == 0 {
            return true;
        }
        let mut labels = LazyLabels::new(seed, rep);
        let mut seen = vec![false; patch.vertex_count()];
        let mut stack = vec![patch.root()];
        seen[patch.root()] = true;
        while let Some(u) = stack.pop() {
            for &(w, e) in g.neighbors(u) {
                let w = w as usize;
                if !seen[w] && labels.is_open(e as usize, p) {
                    if patch.dist(w) >= r {
                        return true;
                    }
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    });
    Ok(McEstimate::from_counts(k, replicas, seed, patch.radius()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;
    use crate::percolation::{two_ghost_event, EdgeLabels};

    #[test]
    fn lockstep_agrees_with_full_clusters() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 5).unwrap();
        let e = root_edge(&patch).unwrap();
        let (x, y) = patch.graph().edge(e);
        for rep in 0..400 {
            let labels = EdgeLabels::sample(patch.graph(), 17, rep);
            for (p, n) in [(0.5, 3), (0.45, 8), (0.6, 2), (0.5, 1)] {
                let full = two_ghost_event(&patch, &labels, p, e, n).unwrap();
                let lock = !labels.is_open(e, p)
                    && explore_pair(&patch, x, y, |f| labels.is_open(f, p), two_ghost_rule(n));
                assert_eq!(full, lock, "replica {rep}, p {p}, n {n}");
            }
        }
    }

    #[test]
    fn trivial_values() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 4).unwrap();
        assert_eq!(est_two_ghost(&patch, 1.0, 2, 50, 1).unwrap().mean, 0.0);
        assert_eq!(est_two_ghost(&patch, 0.5, 1000, 50, 1).unwrap().mean, 0.0);
        assert_eq!(est_sphere_connection(&patch, 0.3, 0, 10, 1).unwrap().mean, 1.0);
        assert_eq!(est_sphere_connection(&patch, 0.0, 2, 10, 1).unwrap().mean, 0.0);
        assert_eq!(est_sphere_connection(&patch, 1.0, 4, 10, 1).unwrap().mean, 1.0);
    }
}
