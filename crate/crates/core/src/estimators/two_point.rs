use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_vector, McEstimate};
use crate::graph::GraphPatch;
use crate::percolation::{restricted_forest, EdgeLabels, VertexMask};

/// Connection probability estimates for every pair in A x B, on shared labels.
#[derive(Debug, Clone)]
pub struct PairGrid {
    pub pairs: Vec<(usize, usize)>,
    pub estimates: Vec<McEstimate>,
}

impl PairGrid {
    /// The pair with the smallest estimated connection probability (first on ties).
    pub fn min(&self) -> (usize, usize, &McEstimate) {
        let mut best = 0;
        for (i, e) in self.estimates.iter().enumerate() {
            if e.mean < self.estimates[best].mean {
                best = i;
            }
        }
        (self.pairs[best].0, self.pairs[best].1, &self.estimates[best])
    }

    pub fn max(&self) -> (usize, usize, &McEstimate) {
        let mut best = 0;
        for (i, e) in self.estimates.iter().enumerate() {
            if e.mean > self.estimates[best].mean {
                best = i;
            }
        }
        (self.pairs[best].0, self.pairs[best].1, &self.estimates[best])
    }
}

pub fn est_pair_grid(
    patch: &GraphPatch,
    p: f64,
    pairs: &[(usize, usize)],
    lambda: Option<&VertexMask>,
    replicas: u64,
    seed: u64,
) -> Result<PairGrid> {
    check_replicas(replicas)?;
    if pairs.is_empty() {
        return Err(Error::Argument("no pairs to estimate".into()));
    }
    for &(u, v) in pairs {
        patch.check_vertex(u)?;
        patch.check_vertex(v)?;
    }
    let inside = |v: usize| lambda.is_none_or(|m| m.contains(v));
    let counts = count_vector(replicas, pairs.len(), |r, acc| {
        let labels = EdgeLabels::sample(patch.graph(), seed, r);
        let mut forest = restricted_forest(patch.graph(), &labels, p, lambda);
        for (slot, &(u, v)) in acc.iter_mut().zip(pairs) {
            if u == v || (inside(u) && inside(v) && forest.same(u, v)) {
                *slot += 1;
            }
        }
    });
    Ok(PairGrid {
        pairs: pairs.to_vec(),
        estimates: counts.iter().map(|&k| McEstimate::from_counts(k, replicas, seed, patch.radius())).collect(),
    })
}

/// Estimate of min over a in A, b in B of P_p(a and b joined inside Lambda).
pub fn est_two_point(
    patch: &GraphPatch,
    p: f64,
    a: &[usize],
    b: &[usize],
    lambda: Option<&VertexMask>,
    replicas: u64,
    seed: u64,
) -> Result<McEstimate> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("connection sets must be nonempty".into()));
    }
    let pairs: Vec<(usize, usize)> = a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))).collect();
    let grid = est_pair_grid(patch, p, &pairs, lambda, replicas, seed)?;
    Ok(grid.min().2.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn trivial_cases() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 2).unwrap();
        assert_eq!(est_two_point(&patch, 1.0, &[0], &[12], None, 20, 1).unwrap().mean, 1.0);
        assert_eq!(est_two_point(&patch, 0.3, &[4], &[4], None, 20, 1).unwrap().mean, 1.0);
        assert_eq!(est_two_point(&patch, 0.0, &[0], &[1], None, 20, 1).unwrap().mean, 0.0);
        assert!(est_two_point(&patch, 0.5, &[], &[1], None, 20, 1).is_err());
    }
}
