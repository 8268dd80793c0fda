//! Connection events evaluated on one label sample.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphPatch};
use crate::percolation::forest::{ClusterForest, DisjointSet};
use crate::percolation::labels::EdgeLabels;

/// A vertex subset of a patch stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMask {
    mask: Vec<bool>,
}

impl VertexMask {
    pub fn full(n: usize) -> VertexMask {
        VertexMask { mask: vec![true; n] }
    }

    pub fn empty(n: usize) -> VertexMask {
        VertexMask { mask: vec![false; n] }
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> VertexMask {
        let mut m = VertexMask::empty(n);
        for &v in vertices {
            m.mask[v] = true;
        }
        m
    }

    /// The ball B_r around the root.
    pub fn ball(patch: &GraphPatch, r: usize) -> VertexMask {
        let end = patch.ball(r).end;
        VertexMask { mask: (0..patch.vertex_count()).map(|v| v < end).collect() }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.mask[v]
    }

    pub fn insert(&mut self, v: usize) {
        self.mask[v] = true;
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&v| self.mask[v]).collect()
    }
}

pub fn clusters(patch: &GraphPatch, labels: &EdgeLabels, p: f64) -> ClusterForest {
    let mut f = ClusterForest::new(patch);
    for (e, &(u, v)) in patch.graph().edges().iter().enumerate() {
        if labels.is_open(e, p) {
            f.union(u as usize, v as usize);
        }
    }
    f
}

/// Union-find over the open edges of any graph.
pub fn open_forest(graph: &Graph, labels: &EdgeLabels, p: f64) -> DisjointSet {
    restricted_forest(graph, labels, p, None)
}

/// Union-find over open edges with both endpoints inside `lambda`.
pub fn restricted_forest(graph: &Graph, labels: &EdgeLabels, p: f64, lambda: Option<&VertexMask>) -> DisjointSet {
    let mut d = DisjointSet::new(graph.vertex_count());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if labels.is_open(e, p) && lambda.is_none_or(|m| m.contains(u as usize) && m.contains(v as usize)) {
            d.union(u as usize, v as usize);
        }
    }
    d
}

/// Union-find of the open edges inside B_n, over the id range of B_n.
pub(crate) fn ball_forest(patch: &GraphPatch, labels: &EdgeLabels, p: f64, n: usize) -> DisjointSet {
    let end = patch.ball(n).end;
    let mut d = DisjointSet::new(end);
    for v in 0..end {
        for &(w, e) in patch.graph().neighbors(v) {
            let w = w as usize;
            if w > v && w < end && labels.is_open(e as usize, p) {
                d.union(v, w);
            }
        }
    }
    d
}

/// Whether an open path with all vertices in `lambda` joins A to B.
pub fn connected(
    patch: &GraphPatch,
    labels: &EdgeLabels,
    p: f64,
    a: &[usize],
    b: &[usize],
    lambda: Option<&VertexMask>,
) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("connection sets must be nonempty".into()));
    }
    let g = patch.graph();
    for &v in a.iter().chain(b) {
        patch.check_vertex(v)?;
    }
    let inside = |v: usize| lambda.is_none_or(|m| m.contains(v));
    let target = VertexMask::from_vertices(g.vertex_count(), b);
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &v in a {
        if inside(v) && !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        if target.contains(u) {
            return Ok(true);
        }
        for &(w, e) in g.neighbors(u) {
            let w = w as usize;
            if !seen[w] && inside(w) && labels.is_open(e as usize, p) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}

fn check_scales(patch: &GraphPatch, m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::Argument(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    patch.check_radius(n)
}

/// At least two distinct clusters of the open subgraph of B_n each meet S_m and S_n.
pub fn piv_event(patch: &GraphPatch, labels: &EdgeLabels, p: f64, m: usize, n: usize) -> Result<bool> {
    check_scales(patch, m, n)?;
    let mut d = ball_forest(patch, labels, p, n);
    Ok(piv_in_forest(patch, &mut d, m, n))
}

pub(crate) fn piv_in_forest(patch: &GraphPatch, d: &mut DisjointSet, m: usize, n: usize) -> bool {
    let mut outer: Vec<usize> = patch.sphere(n).map(|v| d.find(v)).collect();
    outer.sort_unstable();
    outer.dedup();
    let mut first: Option<usize> = None;
    for v in patch.sphere(m) {
        let r = d.find(v);
        if outer.binary_search(&r).is_ok() {
            match first {
                None => first = Some(r),
                Some(f) if f != r => return true,
                _ => {}
            }
        }
    }
    false
}

/// Two distinct p-clusters of B_n meeting both B_m and S_n that stay
/// disconnected inside B_n at the larger parameter q.
///
/// For p = q this coincides with [`piv_event`]: a connected set inside B_n
/// meeting B_m and S_n necessarily meets S_m.
pub fn piv_two_param(patch: &GraphPatch, labels: &EdgeLabels, p: f64, q: f64, m: usize, n: usize) -> Result<bool> {
    if p > q {
        return Err(Error::Argument(format!("need p <= q, got p = {p}, q = {q}")));
    }
    check_scales(patch, m, n)?;
    let mut dp = ball_forest(patch, labels, p, n);
    let mut dq = ball_forest(patch, labels, q, n);
    let mut outer: Vec<usize> = patch.sphere(n).map(|v| dp.find(v)).collect();
    outer.sort_unstable();
    outer.dedup();
    let mut first_q: Option<usize> = None;
    for v in patch.ball(m) {
        let r = dp.find(v);
        if outer.binary_search(&r).is_ok() {
            let rq = dq.find(v);
            match first_q {
                None => first_q = Some(rq),
                Some(f) if f != rq => return Ok(true),
                _ => {}
            }
        }
    }
    Ok(false)
}

/// Edge e closed, its endpoints in distinct clusters of size at least n, and
/// at least one of the two clusters avoiding the patch boundary.
pub fn two_ghost_event(patch: &GraphPatch, labels: &EdgeLabels, p: f64, e: usize, n: usize) -> Result<bool> {
    if e >= patch.edge_count() {
        return Err(Error::Argument(format!("edge {e} is not in the patch")));
    }
    if n == 0 {
        return Err(Error::Argument("cluster size threshold must be at least 1".into()));
    }
    if labels.is_open(e, p) {
        return Ok(false);
    }
    let mut f = clusters(patch, labels, p);
    Ok(two_ghost_in_forest(patch, &mut f, e, n))
}

pub(crate) fn two_ghost_in_forest(patch: &GraphPatch, f: &mut ClusterForest, e: usize, n: usize) -> bool {
    let (x, y) = patch.graph().edge(e);
    if f.same(x, y) || f.size(x) < n || f.size(y) < n {
        return false;
    }
    !f.touches_boundary(x) || !f.touches_boundary(y)
}

/// u and v connected, or both in clusters reaching the patch boundary.
pub fn wired_connected(patch: &GraphPatch, labels: &EdgeLabels, p: f64, u: usize, v: usize) -> Result<bool> {
    patch.check_vertex(u)?;
    patch.check_vertex(v)?;
    if u == v {
        return Ok(true);
    }
    let mut f = clusters(patch, labels, p);
    Ok(f.same(u, v) || (f.touches_boundary(u) && f.touches_boundary(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn z2(r: usize) -> GraphPatch {
        GraphPatch::build(GraphFamily::HyperCubic(2), r).unwrap()
    }

    #[test]
    fn extremes() {
        let p = z2(3);
        let l = EdgeLabels::sample(p.graph(), 1, 0);
        assert!(!piv_event(&p, &l, 1.0, 1, 3).unwrap());
        assert!(!piv_event(&p, &l, 0.0, 1, 3).unwrap());
        assert!(!piv_two_param(&p, &l, 0.3, 1.0, 1, 3).unwrap());
        assert!(wired_connected(&p, &l, 1.0, 0, 20).unwrap());
        assert!(!wired_connected(&p, &l, 0.0, 0, 1).unwrap());
        assert!(connected(&p, &l, 0.0, &[0, 1], &[1], None).unwrap());
        assert!(!connected(&p, &l, 0.0, &[0], &[1], None).unwrap());
        assert!(matches!(connected(&p, &l, 0.5, &[], &[1], None), Err(Error::Argument(_))));
        assert!(matches!(piv_event(&p, &l, 0.5, 3, 2), Err(Error::Argument(_))));
        assert!(matches!(piv_two_param(&p, &l, 0.6, 0.5, 1, 2), Err(Error::Argument(_))));
        for e in 0..p.edge_count() {
            assert!(!two_ghost_event(&p, &l, 1.0, e, 1).unwrap());
            assert!(!two_ghost_event(&p, &l, 0.5, e, p.vertex_count() + 1).unwrap());
        }
    }

    #[test]
    fn two_arms_in_a_cross() {
        // Open the four axis rays: four distinct arms from S_1 to S_3 once the root is removed.
        let p = z2(3);
        let open: Vec<bool> = p
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p.key(u as usize), p.key(v as usize));
                p.dist(u as usize) >= 1 && (a[0] == 0 && b[0] == 0 || a[1] == 0 && b[1] == 0)
            })
            .collect();
        let l = EdgeLabels::from_open(&open);
        assert!(piv_event(&p, &l, 0.5, 1, 3).unwrap());
        assert!(piv_two_param(&p, &l, 0.5, 0.5, 1, 3).unwrap());
    }

    #[test]
    fn restriction_blocks_paths() {
        let p = z2(2);
        let l = EdgeLabels::from_values(vec![0.0; p.edge_count()]);
        let target = p.vertex_of(&[2, 0]).unwrap();
        let lambda = VertexMask::from_vertices(p.vertex_count(), &[0, target]);
        assert!(!connected(&p, &l, 0.5, &[0], &[target], Some(&lambda)).unwrap());
        assert!(connected(&p, &l, 0.5, &[0], &[target], None).unwrap());
    }
}
