use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_vector, McEstimate};
use crate::graph::{geodesic, tube, GraphPatch};
use crate::percolation::{restricted_forest, EdgeLabels, VertexMask};

/// Minimum over a finite path family of the tube-restricted endpoint
/// connection probability. This is an upper bound on the infimum over all paths.
#[derive(Debug, Clone)]
pub struct CorridorEstimate {
    pub estimate: McEstimate,
    /// Index of the minimising path.
    pub worst_path: usize,
    pub per_path: Vec<McEstimate>,
}

/// Default test paths of length at most `m` whose thickness-`n` tubes fit in the patch:
/// the canonical geodesics to the first and last vertex of S_m, a path that turns
/// halfway, and a self-avoiding path hugging the outermost admissible sphere.
pub fn default_corridor_paths(patch: &GraphPatch, m: usize, n: Option<usize>) -> Vec<Vec<usize>> {
    let thickness = n.unwrap_or(1);
    let reach = patch.radius().saturating_sub(thickness);
    let mut paths: Vec<Vec<usize>> = Vec::new();
    if m == 0 {
        return vec![vec![patch.root()]];
    }
    if m <= reach {
        let sphere = patch.sphere(m);
        paths.push(geodesic(patch, patch.root(), sphere.start).expect("patch is connected"));
        paths.push(geodesic(patch, patch.root(), sphere.end - 1).expect("patch is connected"));
        let first = m.div_ceil(2);
        let second = m - first;
        let a = patch.sphere(first).start;
        let turn = patch
            .sphere(m)
            .rev()
            .find(|&w| geodesic(patch, a, w).map(|g| g.len() == second + 1).unwrap_or(false));
        if let Some(w) = turn {
            let mut path = geodesic(patch, patch.root(), a).expect("patch is connected");
            path.extend_from_slice(&geodesic(patch, a, w).expect("patch is connected")[1..]);
            paths.push(path);
        }
    }
    // Hug the sphere S_reach: prefer neighbours on it, then just inside it.
    let g = patch.graph();
    let start = patch.sphere(reach).start;
    let mut path = vec![start];
    let mut visited = vec![false; patch.vertex_count()];
    visited[start] = true;
    while path.len() <= m {
        let cur = *path.last().unwrap();
        let next = [reach, reach.saturating_sub(1)].iter().find_map(|&level| {
            g.neighbors(cur)
                .iter()
                .map(|&(w, _)| w as usize)
                .filter(|&w| !visited[w] && patch.dist(w) == level)
                .min()
        });
        match next {
            Some(w) => {
                visited[w] = true;
                path.push(w);
            }
            None => break,
        }
    }
    paths.push(path);
    paths
}

/// Estimates the corridor function at (m, n): each path's endpoints must connect
/// inside the thickness-n tube around the path (anywhere in the patch when n is None).
pub fn est_corridor(
    patch: &GraphPatch,
    p: f64,
    m: usize,
    n: Option<usize>,
    paths: &[Vec<usize>],
    replicas: u64,
    seed: u64,
) -> Result<CorridorEstimate> {
    check_replicas(replicas)?;
    if paths.is_empty() {
        return Err(Error::Argument("corridor needs at least one test path".into()));
    }
    let mut regions: Vec<Option<VertexMask>> = Vec::with_capacity(paths.len());
    for path in paths {
        if path.len() > m + 1 {
            return Err(Error::Argument(format!("test path of length {} exceeds m = {m}", path.len() - 1)));
        }
        let t = tube(path, n.unwrap_or(0), patch)?;
        match n {
            Some(thick) => {
                let far = path.iter().map(|&v| patch.dist(v)).max().unwrap_or(0);
                if far + thick > patch.radius() {
                    return Err(Error::OutOfPatch { requested: far + thick, radius: patch.radius() });
                }
                regions.push(Some(VertexMask::from_vertices(patch.vertex_count(), &t.vertices)));
            }
            None => regions.push(None),
        }
    }
    let counts = count_vector(replicas, paths.len(), |r, acc| {
        let labels = EdgeLabels::sample(patch.graph(), seed, r);
        for (i, path) in paths.iter().enumerate() {
            let (a, b) = (path[0], path[path.len() - 1]);
            if a == b {
                acc[i] += 1;
                continue;
            }
            let mut forest = restricted_forest(patch.graph(), &labels, p, regions[i].as_ref());
            if forest.same(a, b) {
                acc[i] += 1;
            }
        }
    });
    let per_path: Vec<McEstimate> =
        counts.iter().map(|&k| McEstimate::from_counts(k, replicas, seed, patch.radius())).collect();
    let mut worst = 0;
    for (i, e) in per_path.iter().enumerate() {
        if e.mean < per_path[worst].mean {
            worst = i;
        }
    }
    Ok(CorridorEstimate { estimate: per_path[worst].clone(), worst_path: worst, per_path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn default_paths_fit() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        let paths = default_corridor_paths(&patch, 4, Some(2));
        assert_eq!(paths.len(), 4);
        for path in &paths {
            assert!(path.len() <= 5);
            assert!(path.iter().all(|&v| patch.dist(v) + 2 <= 8));
        }
        // The turning path is not the canonical straight segment.
        assert_ne!(paths[2], paths[0]);
    }

    #[test]
    fn trivial_values() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 6).unwrap();
        let paths = default_corridor_paths(&patch, 3, Some(1));
        assert_eq!(est_corridor(&patch, 1.0, 3, Some(1), &paths, 10, 1).unwrap().estimate.mean, 1.0);
        let zero = default_corridor_paths(&patch, 0, Some(1));
        assert_eq!(est_corridor(&patch, 0.2, 0, Some(1), &zero, 10, 1).unwrap().estimate.mean, 1.0);
        assert!(matches!(est_corridor(&patch, 0.5, 2, Some(1), &paths, 10, 1), Err(Error::Argument(_))));
    }
}
