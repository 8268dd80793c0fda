use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::family::{GraphFamily, Key};

/// A simple undirected graph in compressed adjacency form.
///
/// Each adjacency entry stores the neighbour together with the index of the
/// connecting edge, so edge labels can be looked up during traversals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(u32, u32)>,
    offsets: Vec<u32>,
    adjacency: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds the adjacency structure; neighbour order follows edge order.
    pub fn from_edges(vertex_count: usize, edges: Vec<(u32, u32)>) -> Graph {
        let mut deg = vec![0u32; vertex_count + 1];
        for &(u, v) in &edges {
            deg[u as usize + 1] += 1;
            deg[v as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            deg[i + 1] += deg[i];
        }
        let offsets = deg;
        let mut fill: Vec<u32> = offsets[..vertex_count].to_vec();
        let mut adjacency = vec![(0u32, 0u32); 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adjacency[fill[u as usize] as usize] = (v, e as u32);
            fill[u as usize] += 1;
            adjacency[fill[v as usize] as usize] = (u, e as u32);
            fill[v as usize] += 1;
        }
        Graph { edges, offsets, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        (u as usize, v as usize)
    }

    /// (neighbour, edge index) pairs of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adjacency[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    #[inline]
    pub fn degree_of(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    /// Breadth-first distances from a set of sources within the vertices
    /// accepted by `allowed`; unreachable vertices get `u32::MAX`.
    pub fn bfs_from<F: Fn(usize) -> bool>(&self, sources: &[usize], allowed: F) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            if allowed(s) && dist[s] == u32::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &(w, _) in self.neighbors(u) {
                let w = w as usize;
                if dist[w] == u32::MAX && allowed(w) {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within graph distance `r` of any vertex in `sources`.
    pub fn neighbourhood(&self, sources: &[usize], r: usize) -> Vec<usize> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut frontier: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        for &s in sources {
            if dist[s] == u32::MAX {
                dist[s] = 0;
                frontier.push(s);
                out.push(s);
            }
        }
        for step in 1..=r as u32 {
            let mut next = Vec::new();
            for &u in &frontier {
                for &(w, _) in self.neighbors(u) {
                    let w = w as usize;
                    if dist[w] == u32::MAX {
                        dist[w] = step;
                        next.push(w);
                        out.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out.sort_unstable();
        out
    }
}

/// The closed ball of radius `radius` around the root of an infinite graph.
///
/// Vertex ids follow BFS order from the root, so each sphere occupies a
/// contiguous id range. The root has id 0.
#[derive(Debug, Clone)]
pub struct GraphPatch {
    family: GraphFamily,
    radius: usize,
    degree: usize,
    graph: Graph,
    dist: Vec<u32>,
    sphere_start: Vec<usize>,
    keys: Vec<Key>,
    index: HashMap<Key, u32>,
}

impl GraphPatch {
    pub fn build(family: GraphFamily, radius: usize) -> Result<GraphPatch> {
        family.validate()?;
        let root = family.root();
        let mut keys: Vec<Key> = vec![root.clone()];
        let mut dist: Vec<u32> = vec![0];
        let mut index: HashMap<Key, u32> = HashMap::new();
        index.insert(root, 0);
        let mut scratch = Vec::with_capacity(family.degree());
        let mut head = 0;
        while head < keys.len() {
            let d = dist[head];
            if d as usize == radius {
                break;
            }
            scratch.clear();
            family.neighbors(&keys[head], &mut scratch);
            for nb in scratch.drain(..) {
                if !index.contains_key(&nb) {
                    let id = keys.len() as u32;
                    index.insert(nb.clone(), id);
                    keys.push(nb);
                    dist.push(d + 1);
                }
            }
            head += 1;
        }
        if keys.len() >= u32::MAX as usize {
            return Err(Error::Parameter(format!("patch of radius {radius} is too large")));
        }

        let mut edges = Vec::new();
        for (u, key) in keys.iter().enumerate() {
            scratch.clear();
            family.neighbors(key, &mut scratch);
            for nb in &scratch {
                if let Some(&v) = index.get(nb) {
                    if v as usize > u {
                        edges.push((u as u32, v));
                    }
                }
            }
        }
        let graph = Graph::from_edges(keys.len(), edges);

        let mut sphere_start = vec![0usize; radius + 2];
        let mut r = 0;
        for (v, &d) in dist.iter().enumerate() {
            while r < d as usize {
                r += 1;
                sphere_start[r] = v;
            }
        }
        for slot in sphere_start.iter_mut().skip(r + 1) {
            *slot = keys.len();
        }

        Ok(GraphPatch {
            family,
            radius,
            degree: family.degree(),
            graph,
            dist,
            sphere_start,
            keys,
            index,
        })
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Degree of the infinite graph.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    #[inline]
    pub fn dist(&self, v: usize) -> usize {
        self.dist[v] as usize
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    pub fn key(&self, v: usize) -> &[i64] {
        &self.keys[v]
    }

    pub fn vertex_of(&self, key: &[i64]) -> Option<usize> {
        self.index.get(key).map(|&v| v as usize)
    }

    pub fn check_radius(&self, n: usize) -> Result<()> {
        if n > self.radius {
            Err(Error::OutOfPatch { requested: n, radius: self.radius })
        } else {
            Ok(())
        }
    }

    /// Id range of the sphere S_n.
    pub fn sphere(&self, n: usize) -> Range<usize> {
        if n > self.radius {
            let len = self.vertex_count();
            return len..len;
        }
        self.sphere_start[n]..self.sphere_start[n + 1]
    }

    /// Id range of the ball B_n (clamped to the patch).
    pub fn ball(&self, n: usize) -> Range<usize> {
        0..self.sphere_start[(n + 1).min(self.radius + 1)]
    }

    /// |B_n(o)|.
    pub fn growth(&self, n: usize) -> Result<usize> {
        self.check_radius(n)?;
        Ok(self.sphere_start[n + 1])
    }

    /// Ball size using the patch where possible and the family's closed form beyond it.
    pub fn growth_extended(&self, n: usize) -> Result<u128> {
        if n <= self.radius {
            Ok(self.sphere_start[n + 1] as u128)
        } else {
            self.family
                .growth_formula(n)
                .ok_or(Error::OutOfPatch { requested: n, radius: self.radius })
        }
    }

    pub fn boundary(&self) -> Range<usize> {
        self.sphere(self.radius)
    }

    #[inline]
    pub fn is_boundary(&self, v: usize) -> bool {
        self.dist[v] as usize == self.radius
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        v < self.vertex_count()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::Argument(format!("vertex {v} is not in the patch")))
        }
    }

    /// Every edge with both endpoints in B_n has an id below this bound.
    pub fn ball_edge_bound(&self, n: usize) -> usize {
        let end = self.ball(n).end as u32;
        self.graph.edges().partition_point(|&(u, _)| u < end)
    }

    /// Edges with both endpoints in B_n, as a boolean mask over edge ids.
    pub fn ball_edge_mask(&self, n: usize) -> Vec<bool> {
        let end = self.ball(n).end;
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| (u as usize) < end && (v as usize) < end)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        let z2 = GraphPatch::build(GraphFamily::HyperCubic(2), 1).unwrap();
        assert_eq!((z2.vertex_count(), z2.edge_count()), (5, 4));
        let tree = GraphPatch::build(GraphFamily::RegularTree(3), 2).unwrap();
        assert_eq!(tree.vertex_count(), 10);
        assert_eq!(tree.sphere(2), 4..10);
    }

    #[test]
    fn interior_vertices_have_full_degree() {
        for fam in [
            GraphFamily::Kagome312,
            GraphFamily::Heisenberg3,
            GraphFamily::MacroGrid(2),
            GraphFamily::Slab { dim: 3, periodic: 1, period: 3 },
        ] {
            let p = GraphPatch::build(fam, 4).unwrap();
            for v in p.ball(3) {
                assert_eq!(p.graph().degree_of(v), fam.degree(), "{fam} vertex {v}");
            }
        }
    }

    #[test]
    fn growth_checks_radius() {
        let p = GraphPatch::build(GraphFamily::HyperCubic(2), 3).unwrap();
        assert_eq!(p.growth(2).unwrap(), 13);
        assert_eq!(p.growth(4), Err(Error::OutOfPatch { requested: 4, radius: 3 }));
        assert_eq!(p.growth_extended(10).unwrap(), 221);
    }
}
