use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::family::{GraphFamily, Key};
use crate::graph::patch::Graph;

const EPS: f64 = 1e-7;

/// The subgraph of a planar lattice induced by a Euclidean square of side
/// `side - 1` bond lengths, anchored at the root, with its left and right
/// boundary strips.
///
/// On the square lattice this is exactly the `side x side` grid.
#[derive(Debug, Clone)]
pub struct BoxRegion {
    family: GraphFamily,
    side: usize,
    graph: Graph,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl BoxRegion {
    pub fn build(family: GraphFamily, side: usize) -> Result<BoxRegion> {
        family.validate()?;
        if !family.is_planar() {
            return Err(Error::Criterion(format!("{family} has no planar embedding for box crossings")));
        }
        if side < 2 {
            return Err(Error::Parameter(format!("box side must be at least 2, got {side}")));
        }
        let w = (side - 1) as f64;
        let (x0, y0) = family.embed(&family.root()).expect("planar family");
        let inside = |p: (f64, f64), margin: f64| {
            p.0 >= x0 - EPS - margin && p.0 <= x0 + w + EPS + margin && p.1 >= y0 - EPS - margin && p.1 <= y0 + w + EPS + margin
        };

        // Explore a slightly enlarged square so the search never gets stuck at a ragged edge.
        let mut seen: HashMap<Key, ()> = HashMap::new();
        let mut order: Vec<Key> = Vec::new();
        let mut queue = VecDeque::from([family.root()]);
        seen.insert(family.root(), ());
        let mut scratch = Vec::new();
        while let Some(k) = queue.pop_front() {
            scratch.clear();
            family.neighbors(&k, &mut scratch);
            for nb in scratch.drain(..) {
                if !seen.contains_key(&nb) && inside(family.embed(&nb).unwrap(), 2.0) {
                    seen.insert(nb.clone(), ());
                    queue.push_back(nb);
                }
            }
            order.push(k);
        }

        let kept: Vec<Key> = order.into_iter().filter(|k| inside(family.embed(k).unwrap(), 0.0)).collect();
        let index: HashMap<&[i64], u32> = kept.iter().enumerate().map(|(i, k)| (k.as_slice(), i as u32)).collect();
        let mut edges = Vec::new();
        for (u, k) in kept.iter().enumerate() {
            scratch.clear();
            family.neighbors(k, &mut scratch);
            for nb in &scratch {
                if let Some(&v) = index.get(nb.as_slice()) {
                    if v as usize > u {
                        edges.push((u as u32, v));
                    }
                }
            }
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, k) in kept.iter().enumerate() {
            let (x, _) = family.embed(k).unwrap();
            if x - x0 < 1.0 - 1e-6 {
                left.push(i);
            }
            if x0 + w - x < 1.0 - 1e-6 {
                right.push(i);
            }
        }
        Ok(BoxRegion { family, side, graph: Graph::from_edges(kept.len(), edges), left, right })
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice_box_is_grid() {
        let b = BoxRegion::build(GraphFamily::HyperCubic(2), 5).unwrap();
        assert_eq!(b.graph().vertex_count(), 25);
        assert_eq!(b.graph().edge_count(), 40);
        assert_eq!(b.left().len(), 5);
        assert_eq!(b.right().len(), 5);
    }

    #[test]
    fn other_lattices_have_comparable_density() {
        for fam in [GraphFamily::Triangular, GraphFamily::Hexagonal, GraphFamily::Kagome312] {
            let b = BoxRegion::build(fam, 20).unwrap();
            assert!(!b.left().is_empty() && !b.right().is_empty(), "{fam}");
            let d = b.graph().vertex_count() as f64 / 361.0;
            assert!(d > 0.3 && d < 2.0, "{fam}: density {d}");
        }
        assert!(matches!(BoxRegion::build(GraphFamily::HyperCubic(3), 8), Err(Error::Criterion(_))));
    }
}
