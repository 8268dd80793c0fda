use rand::RngCore;

use crate::error::{Error, Result};
use crate::graph::GraphPatch;
use crate::percolation::rng::{self, Domain};

/// Lazy walk of `t` steps from `start`, replica 0.
pub fn lazy_walk(patch: &GraphPatch, start: usize, t: usize, seed: u64) -> Result<Vec<usize>> {
    lazy_walk_replica(patch, start, t, seed, 0)
}

/// Step i consumes the i-th word pair of the walk stream: below 1/2 the walk
/// stays, otherwise it moves to one of the d neighbour slots. Slots missing
/// from the patch end the walk with a truncation error.
pub fn lazy_walk_replica(patch: &GraphPatch, start: usize, t: usize, seed: u64, replica: u64) -> Result<Vec<usize>> {
    patch.check_vertex(start)?;
    let d = patch.degree();
    let g = patch.graph();
    let mut rng = rng::stream(seed, Domain::Walk, replica);
    let mut path = Vec::with_capacity(t + 1);
    path.push(start);
    let mut cur = start;
    for _ in 0..t {
        let u = rng::unit(rng.next_u64());
        if u >= 0.5 {
            let slot = (((u - 0.5) * 2.0 * d as f64) as usize).min(d - 1);
            let nbs = g.neighbors(cur);
            match nbs.get(slot) {
                Some(&(w, _)) => cur = w as usize,
                None => return Err(Error::Truncation { mass: 1.0 }),
            }
        }
        path.push(cur);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn zero_steps_and_laziness() {
        let patch = GraphPatch::build(GraphFamily::RegularTree(3), 3).unwrap();
        assert_eq!(lazy_walk(&patch, 0, 0, 1).unwrap(), vec![0]);
        let z = GraphPatch::build(GraphFamily::HyperCubic(1), 400).unwrap();
        let mut stays = 0;
        let mut total = 0;
        for rep in 0..50 {
            let w = lazy_walk_replica(&z, 0, 200, 5, rep).unwrap();
            stays += w.windows(2).filter(|s| s[0] == s[1]).count();
            total += 200;
        }
        assert!((stays as f64 / total as f64 - 0.5).abs() < 0.02);
    }
}
