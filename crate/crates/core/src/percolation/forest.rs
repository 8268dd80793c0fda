use crate::graph::GraphPatch;
use crate::percolation::labels::EdgeLabels;

/// Union-find with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
    count: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> DisjointSet {
        DisjointSet { parent: (0..n as u32).collect(), size: vec![1; n], count: n }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Root of `x` without compressing.
    pub fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the new root if they were distinct.
    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.count -= 1;
        Some(ra)
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn size_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    pub fn components(&self) -> usize {
        self.count
    }

    /// Canonical partition: each vertex mapped to the smallest vertex of its set.
    pub fn partition(&mut self) -> Vec<u32> {
        let n = self.len();
        let mut first = vec![u32::MAX; n];
        let mut out = vec![0; n];
        for v in 0..n {
            let r = self.find(v);
            if first[r] == u32::MAX {
                first[r] = v as u32;
            }
            out[v] = first[r];
        }
        out
    }
}

/// Cluster decomposition of a percolation configuration on a patch, with
/// per-cluster boundary and distance range flags.
#[derive(Debug, Clone)]
pub struct ClusterForest {
    sets: DisjointSet,
    touches_boundary: Vec<bool>,
    min_dist: Vec<u32>,
    max_dist: Vec<u32>,
}

impl ClusterForest {
    /// All singletons.
    pub fn new(patch: &GraphPatch) -> ClusterForest {
        let n = patch.vertex_count();
        ClusterForest {
            sets: DisjointSet::new(n),
            touches_boundary: (0..n).map(|v| patch.is_boundary(v)).collect(),
            min_dist: patch.distances().to_vec(),
            max_dist: patch.distances().to_vec(),
        }
    }

    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.sets.find(a), self.sets.find(b));
        match self.sets.union(ra, rb) {
            None => false,
            Some(root) => {
                let other = if root == ra { rb } else { ra };
                self.touches_boundary[root] |= self.touches_boundary[other];
                self.min_dist[root] = self.min_dist[root].min(self.min_dist[other]);
                self.max_dist[root] = self.max_dist[root].max(self.max_dist[other]);
                true
            }
        }
    }

    pub fn find(&mut self, v: usize) -> usize {
        self.sets.find(v)
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.sets.same(a, b)
    }

    pub fn size(&mut self, v: usize) -> usize {
        self.sets.size_of(v)
    }

    pub fn touches_boundary(&mut self, v: usize) -> bool {
        let r = self.sets.find(v);
        self.touches_boundary[r]
    }

    pub fn min_dist(&mut self, v: usize) -> usize {
        let r = self.sets.find(v);
        self.min_dist[r] as usize
    }

    pub fn max_dist(&mut self, v: usize) -> usize {
        let r = self.sets.find(v);
        self.max_dist[r] as usize
    }

    pub fn components(&self) -> usize {
        self.sets.components()
    }

    pub fn partition(&mut self) -> Vec<u32> {
        self.sets.partition()
    }
}

/// Incremental sweep in p: edges are merged in label order, so after
/// `advance_to(p)` the forest equals the clusters of the configuration at p.
#[derive(Debug, Clone)]
pub struct Sweep<'a> {
    patch: &'a GraphPatch,
    labels: &'a EdgeLabels,
    order: Vec<u32>,
    next: usize,
    forest: ClusterForest,
}

impl<'a> Sweep<'a> {
    pub fn new(patch: &'a GraphPatch, labels: &'a EdgeLabels) -> Sweep<'a> {
        let mut order: Vec<u32> = (0..labels.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| labels.label(a as usize).total_cmp(&labels.label(b as usize)));
        Sweep { patch, labels, order, next: 0, forest: ClusterForest::new(patch) }
    }

    /// Sorted labels, i.e. the breakpoints where the configuration changes.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.order.iter().map(|&e| self.labels.label(e as usize))
    }

    /// Merges every edge with label <= p. Sweeps only move forward.
    pub fn advance_to(&mut self, p: f64) -> &mut ClusterForest {
        let g = self.patch.graph();
        while self.next < self.order.len() {
            let e = self.order[self.next] as usize;
            if self.labels.label(e) > p {
                break;
            }
            let (u, v) = g.edge(e);
            self.forest.union(u, v);
            self.next += 1;
        }
        &mut self.forest
    }

    pub fn forest(&mut self) -> &mut ClusterForest {
        &mut self.forest
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;
    use crate::percolation::clusters;

    #[test]
    fn disjoint_set_basics() {
        let mut d = DisjointSet::new(5);
        assert!(d.union(0, 1).is_some());
        assert!(d.union(1, 0).is_none());
        d.union(3, 4);
        assert_eq!(d.components(), 3);
        assert_eq!(d.partition(), vec![0, 0, 2, 3, 3]);
        assert_eq!(d.size_of(4), 2);
    }

    #[test]
    fn sweep_matches_scratch_at_breakpoints() {
        let patch = GraphPatch::build(GraphFamily::Triangular, 3).unwrap();
        let labels = EdgeLabels::sample(patch.graph(), 5, 0);
        let mut sweep = Sweep::new(&patch, &labels);
        let points: Vec<f64> = sweep.breakpoints().step_by(7).collect();
        for p in points {
            let a = sweep.advance_to(p).partition();
            let b = clusters(&patch, &labels, p).partition();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn flags_follow_merges() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 2).unwrap();
        let mut f = ClusterForest::new(&patch);
        let far = patch.sphere(2).start;
        assert!(!f.touches_boundary(0));
        let path = crate::graph::geodesic(&patch, 0, far).unwrap();
        for w in path.windows(2) {
            f.union(w[0], w[1]);
        }
        assert!(f.touches_boundary(0));
        assert_eq!((f.min_dist(far), f.max_dist(0)), (0, 2));
        assert_eq!(f.size(0), 3);
    }
}
