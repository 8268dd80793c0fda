//! Deterministic geometry on patches: exposed spheres, boundary scales,
//! low growth scales, canonical geodesics and tubes.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::patch::{Graph, GraphPatch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExposedSphere {
    pub r: usize,
    pub escape_radius: usize,
    /// Sorted vertex ids of the exposed part of S_r.
    pub vertices: Vec<usize>,
    /// Whether the set is unchanged when the escape radius is lowered by one.
    pub stabilized: bool,
}

fn exposed_at(patch: &GraphPatch, r: usize, escape: usize) -> Vec<usize> {
    let g = patch.graph();
    let sources: Vec<usize> = patch.sphere(escape).collect();
    let reach = g.bfs_from(&sources, |v| {
        let d = patch.dist(v);
        d > r && d <= escape
    });
    patch
        .sphere(r)
        .filter(|&u| {
            g.neighbors(u)
                .iter()
                .any(|&(w, _)| patch.dist(w as usize) > r && reach[w as usize] != u32::MAX)
        })
        .collect()
}

/// Vertices of S_r from which a self-avoiding path reaches S_{escape_radius}
/// without coming back into B_r after its first step.
pub fn exposed_sphere(patch: &GraphPatch, r: usize, escape_radius: usize) -> Result<ExposedSphere> {
    if escape_radius <= r {
        return Err(Error::Argument(format!(
            "escape radius {escape_radius} must exceed the sphere radius {r}"
        )));
    }
    patch.check_radius(escape_radius)?;
    let vertices = exposed_at(patch, r, escape_radius);
    let stabilized = escape_radius > r + 1 && exposed_at(patch, r, escape_radius - 1) == vertices;
    Ok(ExposedSphere { r, escape_radius, vertices, stabilized })
}

fn check_path(graph: &Graph, path: &[usize]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::Argument("path is empty".into()));
    }
    for &v in path {
        if v >= graph.vertex_count() {
            return Err(Error::Argument(format!("vertex {v} is not in the patch")));
        }
    }
    for w in path.windows(2) {
        if !graph.neighbors(w[0]).iter().any(|&(x, _)| x as usize == w[1]) {
            return Err(Error::Argument(format!("vertices {} and {} are not adjacent", w[0], w[1])));
        }
    }
    Ok(())
}

/// Whether a path from S_r to S_{2r+1} meets the exposed sphere computed with
/// the largest escape radius the patch offers.
pub fn crossing_hits_exposed(patch: &GraphPatch, r: usize, path: &[usize]) -> Result<bool> {
    check_path(patch.graph(), path)?;
    let (first, last) = (path[0], path[path.len() - 1]);
    if patch.dist(first) != r || patch.dist(last) != 2 * r + 1 {
        return Err(Error::Argument(format!(
            "path must run from S_{r} to S_{}, got distances {} and {}",
            2 * r + 1,
            patch.dist(first),
            patch.dist(last)
        )));
    }
    let exposed = exposed_sphere(patch, r, patch.radius())?;
    Ok(path.iter().any(|v| exposed.vertices.binary_search(v).is_ok()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryScale {
    pub m: usize,
    /// |∂B_m|, counted as edges with exactly one endpoint in B_m.
    pub boundary_edges: u64,
    pub ball_size: u64,
    pub ratio: f64,
    /// d(d-1)/log(d) * log|B_{2n}| / n, when B_{2n} is available.
    pub bound: Option<f64>,
}

fn edge_boundary(patch: &GraphPatch, m: usize) -> u64 {
    let g = patch.graph();
    let d = patch.degree();
    patch
        .sphere(m)
        .map(|v| {
            let outward = g.neighbors(v).iter().filter(|&&(w, _)| patch.dist(w as usize) > m).count();
            // Neighbours missing from the patch lie at distance m + 1.
            (outward + d - g.degree_of(v)) as u64
        })
        .sum()
}

/// The scale m in [n, 2n-1] with the smallest boundary-to-volume ratio
/// (smallest m on ties).
pub fn boundary_ratio_scale(patch: &GraphPatch, n: usize) -> Result<BoundaryScale> {
    if n == 0 {
        return Err(Error::Argument("scale must be at least 1".into()));
    }
    patch.check_radius(2 * n - 1)?;
    let mut best: Option<(usize, u64, u64)> = None;
    for m in n..2 * n {
        let b = edge_boundary(patch, m);
        let vol = patch.growth(m)? as u64;
        let better = match best {
            None => true,
            Some((_, bb, bv)) => (b as u128) * (bv as u128) < (bb as u128) * (vol as u128),
        };
        if better {
            best = Some((m, b, vol));
        }
    }
    let (m, boundary_edges, ball_size) = best.expect("nonempty scale range");
    let d = patch.degree() as f64;
    let bound = patch.growth_extended(2 * n).ok().map(|g| d * (d - 1.0) / d.ln() * (g as f64).ln() / n as f64);
    Ok(BoundaryScale { m, boundary_edges, ball_size, ratio: boundary_edges as f64 / ball_size as f64, bound })
}

/// Smallest integer k with k^3 >= n.
pub fn ceil_cbrt(n: usize) -> usize {
    let mut k = (n as f64).cbrt().round() as usize;
    while k.pow(3) < n {
        k += 1;
    }
    while k > 0 && (k - 1).pow(3) >= n {
        k -= 1;
    }
    k
}

/// Low growth scales {n <= n_max : log Gr(m) <= (log m)^D for all m in [n^{1/3}, n]}
/// for an arbitrary growth function.
pub fn low_growth_scales_with<F>(growth: F, big_d: f64, n_max: usize) -> Result<Vec<usize>>
where
    F: Fn(usize) -> Result<u128>,
{
    if !(big_d >= 1.0) {
        return Err(Error::Domain(format!("growth exponent must be at least 1, got {big_d}")));
    }
    // failures[m] counts scales <= m violating the bound.
    let mut failures = vec![0usize; n_max + 1];
    for m in 1..=n_max {
        let ok = (growth(m)? as f64).ln() <= (m as f64).ln().powf(big_d);
        failures[m] = failures[m - 1] + usize::from(!ok);
    }
    Ok((1..=n_max)
        .filter(|&n| {
            let lo = ceil_cbrt(n).max(1);
            failures[n] - failures[lo - 1] == 0
        })
        .collect())
}

/// Low growth scales of the patch's family, up to `n_max`.
pub fn low_growth_scales(patch: &GraphPatch, big_d: f64, n_max: usize) -> Result<Vec<usize>> {
    low_growth_scales_with(|m| patch.growth_extended(m), big_d, n_max)
}

/// Canonical shortest path from `u` to `v`: from each vertex the next step is
/// the smallest-index neighbour one step closer to `v`.
pub fn geodesic(patch: &GraphPatch, u: usize, v: usize) -> Result<Vec<usize>> {
    geodesic_in(patch.graph(), u, v)
}

pub(crate) fn geodesic_in(g: &Graph, u: usize, v: usize) -> Result<Vec<usize>> {
    for x in [u, v] {
        if x >= g.vertex_count() {
            return Err(Error::Argument(format!("vertex {x} is not in the patch")));
        }
    }
    if u == v {
        return Ok(vec![u]);
    }
    let mut dist: HashMap<usize, u32> = HashMap::new();
    dist.insert(v, 0);
    let mut queue = VecDeque::from([v]);
    let mut found = false;
    'bfs: while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        for &(w, _) in g.neighbors(x) {
            let w = w as usize;
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(dx + 1);
                if w == u {
                    found = true;
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
    }
    if !found {
        return Err(Error::Argument(format!("vertices {u} and {v} are not connected")));
    }
    let mut path = vec![u];
    let mut cur = u;
    while cur != v {
        let dc = dist[&cur];
        let next = g
            .neighbors(cur)
            .iter()
            .map(|&(w, _)| w as usize)
            .filter(|w| dist.get(w) == Some(&(dc - 1)))
            .min()
            .expect("a closer neighbour exists");
        path.push(next);
        cur = next;
    }
    Ok(path)
}

/// The r-neighbourhood of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeSpec {
    pub path: Vec<usize>,
    pub thickness: usize,
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
}

impl TubeSpec {
    /// Number of edges of the path.
    pub fn length(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn intersects(&self, other: &TubeSpec) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

pub fn tube(path: &[usize], r: usize, patch: &GraphPatch) -> Result<TubeSpec> {
    tube_in(patch.graph(), path, r)
}

pub(crate) fn tube_in(g: &Graph, path: &[usize], r: usize) -> Result<TubeSpec> {
    check_path(g, path)?;
    Ok(TubeSpec { path: path.to_vec(), thickness: r, vertices: g.neighbourhood(path, r) })
}
