use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::GraphPatch;
use crate::percolation::rng::{self, Domain};
use crate::walks::kernel::{kernel_sequence, step_prob, tv_distance, WalkDistribution};

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub walk_x: Vec<usize>,
    pub walk_y: Vec<usize>,
    pub coalesced: bool,
    /// Total variation distance of the two time-t laws.
    pub tv: f64,
}

fn draw(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let target = rng::unit(rng.next_u64()) * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (v, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last = v;
            if target < acc {
                return v;
            }
        }
    }
    last
}

/// Fills in a path with the given endpoint, backwards, from the exact laws
/// `laws[s]` of the walk at times s.
fn bridge(patch: &GraphPatch, laws: &[WalkDistribution], end: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let t = laws.len() - 1;
    let mut path = vec![0; t + 1];
    path[t] = end;
    let g = patch.graph();
    for s in (1..=t).rev() {
        let z = path[s];
        let mut cands = vec![z];
        cands.extend(g.neighbors(z).iter().map(|&(w, _)| w as usize));
        cands.sort_unstable();
        cands.dedup();
        let weights: Vec<f64> = cands.iter().map(|&w| laws[s - 1].at(w) * step_prob(patch, w, z)).collect();
        path[s - 1] = cands[draw(rng, &weights)];
    }
    path
}

/// Maximal coupling of the time-t laws from `x` and `y`, replica 0.
pub fn coupled_pair(patch: &GraphPatch, x: usize, y: usize, t: usize, seed: u64) -> Result<CoupledPair> {
    coupled_pair_replica(patch, x, y, t, seed, 0)
}

/// Endpoints come from the maximal coupling; trajectories are bridges to
/// those endpoints. When the endpoints agree, the second walk follows the
/// first from their first meeting on.
pub fn coupled_pair_replica(
    patch: &GraphPatch,
    x: usize,
    y: usize,
    t: usize,
    seed: u64,
    replica: u64,
) -> Result<CoupledPair> {
    let lx = kernel_sequence(patch, x, t)?;
    let ly = kernel_sequence(patch, y, t)?;
    let (mx, my) = (&lx[t], &ly[t]);
    let tv = tv_distance(mx, my);
    let mut rng = rng::stream(seed, Domain::Coupling, replica);
    let overlap: Vec<f64> = mx.mass.iter().zip(&my.mass).map(|(a, b)| a.min(*b)).collect();
    let coalesced = rng::unit(rng.next_u64()) >= tv;
    let (ex, ey) = if coalesced {
        let z = draw(&mut rng, &overlap);
        (z, z)
    } else {
        let ox: Vec<f64> = mx.mass.iter().zip(&my.mass).map(|(a, b)| (a - b).max(0.0)).collect();
        let oy: Vec<f64> = my.mass.iter().zip(&mx.mass).map(|(a, b)| (a - b).max(0.0)).collect();
        (draw(&mut rng, &ox), draw(&mut rng, &oy))
    };
    let walk_x = bridge(patch, &lx, ex, &mut rng);
    let mut walk_y = bridge(patch, &ly, ey, &mut rng);
    if coalesced {
        if let Some(s) = (0..=t).find(|&s| walk_x[s] == walk_y[s]) {
            walk_y[s..].copy_from_slice(&walk_x[s..]);
        }
    }
    Ok(CoupledPair { walk_x, walk_y, coalesced, tv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn same_start_coalesces() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 6).unwrap();
        for rep in 0..20 {
            let c = coupled_pair_replica(&patch, 0, 0, 5, 3, rep).unwrap();
            assert!(c.coalesced);
            assert_eq!(c.walk_x, c.walk_y);
        }
    }

    #[test]
    fn bridges_are_walk_paths() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        let y = patch.sphere(2).start;
        for rep in 0..50 {
            let c = coupled_pair_replica(&patch, 0, y, 6, 3, rep).unwrap();
            assert_eq!((c.walk_x[0], c.walk_y[0]), (0, y));
            for w in [&c.walk_x, &c.walk_y] {
                for s in w.windows(2) {
                    assert!(step_prob(&patch, s[0], s[1]) > 0.0);
                }
            }
            assert_eq!(c.coalesced, c.walk_x[6] == c.walk_y[6]);
        }
    }
}
