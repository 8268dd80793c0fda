use crate::graph::{Graph, GraphPatch};
use crate::percolation::rng::{self, Domain};

/// One uniform label per edge. The configuration at `p` opens exactly the
/// edges with `label <= p`, so all p are realised on the same sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLabels {
    labels: Vec<f64>,
    seed: u64,
    replica: u64,
}

impl EdgeLabels {
    pub fn sample(graph: &Graph, seed: u64, replica: u64) -> EdgeLabels {
        let mut labels = vec![0.0; graph.edge_count()];
        rng::fill_uniform(seed, Domain::EdgeLabels, replica, &mut labels);
        EdgeLabels { labels, seed, replica }
    }

    /// The first `count` labels of a replica; enough for any subgraph whose
    /// edge ids all lie below `count`.
    pub fn sample_prefix(seed: u64, replica: u64, count: usize) -> EdgeLabels {
        let mut labels = vec![0.0; count];
        rng::fill_uniform(seed, Domain::EdgeLabels, replica, &mut labels);
        EdgeLabels { labels, seed, replica }
    }

    /// Labels given explicitly, e.g. by an enumeration over configurations.
    pub fn from_values(labels: Vec<f64>) -> EdgeLabels {
        EdgeLabels { labels, seed: 0, replica: 0 }
    }

    /// Labels making exactly the edges flagged in `open` open for every p in (0,1).
    pub fn from_open(open: &[bool]) -> EdgeLabels {
        EdgeLabels::from_values(open.iter().map(|&o| if o { 0.0 } else { 1.0 }).collect())
    }

    pub fn generator_id(&self) -> &'static str {
        rng::GENERATOR_ID
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replica(&self) -> u64 {
        self.replica
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn label(&self, e: usize) -> f64 {
        self.labels[e]
    }

    pub fn values(&self) -> &[f64] {
        &self.labels
    }

    #[inline]
    pub fn is_open(&self, e: usize, p: f64) -> bool {
        self.labels[e] <= p
    }

    pub fn open_edges(&self, p: f64) -> Vec<usize> {
        (0..self.labels.len()).filter(|&e| self.labels[e] <= p).collect()
    }
}

pub fn sample_labels(patch: &GraphPatch, seed: u64) -> EdgeLabels {
    EdgeLabels::sample(patch.graph(), seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn lazy_labels_agree() {
        let p = GraphPatch::build(GraphFamily::HyperCubic(3), 3).unwrap();
        let full = EdgeLabels::sample(p.graph(), 3, 9);
        let mut lazy = LazyLabels::new(3, 9);
        for e in [40, 0, 7, 40, p.edge_count() - 1] {
            assert_eq!(lazy.label(e), full.label(e));
        }
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let p = GraphPatch::build(GraphFamily::HyperCubic(2), 3).unwrap();
        assert_eq!(sample_labels(&p, 11), sample_labels(&p, 11));
        assert_ne!(sample_labels(&p, 11).values(), sample_labels(&p, 12).values());
    }
}

/// Labels of one replica generated on demand, for traversals that only
/// touch a small part of a large patch. Values agree with [`EdgeLabels::sample`].
#[derive(Debug, Clone)]
pub struct LazyLabels {
    rng: rand_chacha::ChaCha8Rng,
    cache: std::collections::HashMap<u32, f64>,
}

impl LazyLabels {
    pub fn new(seed: u64, replica: u64) -> LazyLabels {
        LazyLabels { rng: rng::stream(seed, Domain::EdgeLabels, replica), cache: Default::default() }
    }

    pub fn label(&mut self, e: usize) -> f64 {
        use rand::RngCore;
        let rng = &mut self.rng;
        *self.cache.entry(e as u32).or_insert_with(|| {
            rng.set_word_pos(2 * e as u128);
            rng::unit(rng.next_u64())
        })
    }

    #[inline]
    pub fn is_open(&mut self, e: usize, p: f64) -> bool {
        self.label(e) <= p
    }
}
