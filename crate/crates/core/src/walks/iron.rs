use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphPatch};
use crate::graph::geodesic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IronedPath {
    pub original: Vec<usize>,
    pub thickness: usize,
    pub crease_times: Vec<usize>,
    pub crease_points: Vec<usize>,
    pub ironed: Vec<usize>,
    /// Both tube containments were checked; false when the doubled tubes
    /// reach the patch boundary and the check is not meaningful.
    pub verified: bool,
}

impl IronedPath {
    pub fn crease_number(&self) -> usize {
        self.crease_times.len() - 1
    }

    pub fn ironed_length(&self) -> usize {
        self.ironed.len() - 1
    }
}

/// Vertices within distance r - 1 of `c`.
fn inner_ball(g: &Graph, c: usize, r: usize) -> HashSet<usize> {
    let mut seen = HashSet::from([c]);
    let mut frontier = vec![c];
    for _ in 1..r {
        let mut next = Vec::new();
        for &u in &frontier {
            for &(w, _) in g.neighbors(u) {
                if seen.insert(w as usize) {
                    next.push(w as usize);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// tau_0 = 0, then each next time is the first one at distance >= r from the
/// previous crease point, or the path end. A path of length 0 has no creases.
pub fn crease_times(g: &Graph, path: &[usize], r: usize) -> Vec<usize> {
    let len = path.len() - 1;
    let mut taus = vec![0];
    let mut cur = 0;
    while cur < len {
        let ball = inner_ball(g, path[cur], r);
        cur = (cur + 1..=len).find(|&k| !ball.contains(&path[k])).unwrap_or(len);
        taus.push(cur);
    }
    taus
}

pub fn iron(path: &[usize], r: usize, patch: &GraphPatch) -> Result<IronedPath> {
    if r == 0 {
        return Err(Error::Argument("ironing thickness must be at least 1".into()));
    }
    if path.is_empty() {
        return Err(Error::Argument("cannot iron an empty path".into()));
    }
    for &v in path {
        patch.check_vertex(v)?;
    }
    let g = patch.graph();
    let taus = crease_times(g, path, r);
    let points: Vec<usize> = taus.iter().map(|&k| path[k]).collect();
    let mut ironed = vec![path[0]];
    for w in points.windows(2) {
        let seg = geodesic(patch, w[0], w[1])?;
        ironed.extend_from_slice(&seg[1..]);
    }
    let mut out = IronedPath {
        original: path.to_vec(),
        thickness: r,
        crease_times: taus,
        crease_points: points,
        ironed,
        verified: false,
    };
    out.verified = check_containments(patch, &out)?;
    Ok(out)
}

fn check_containments(patch: &GraphPatch, ip: &IronedPath) -> Result<bool> {
    let g = patch.graph();
    let r = ip.thickness;
    let big_orig = g.neighbourhood(&ip.original, 2 * r);
    let big_iron = g.neighbourhood(&ip.ironed, 2 * r);
    if big_orig.iter().chain(&big_iron).any(|&v| patch.is_boundary(v)) {
        return Ok(false);
    }
    let subset = |small: &[usize], big: &[usize]| small.iter().all(|v| big.binary_search(v).is_ok());
    if !subset(&g.neighbourhood(&ip.ironed, r), &big_orig) {
        return Err(Error::Invariant("r-tube of the ironed path escapes the 2r-tube of the path".into()));
    }
    if !subset(&g.neighbourhood(&ip.original, r), &big_iron) {
        return Err(Error::Invariant("r-tube of the path escapes the 2r-tube of the ironed path".into()));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn short_path_single_crease() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 9).unwrap();
        let p = geodesic(&patch, 0, patch.sphere(2).start).unwrap();
        let ip = iron(&p, 3, &patch).unwrap();
        assert_eq!(ip.crease_number(), 1);
        assert_eq!(ip.ironed, p);
        assert!(ip.verified);
    }

    #[test]
    fn geodesic_creases_every_r() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 12).unwrap();
        let p = geodesic(&patch, 0, patch.sphere(7).start).unwrap();
        let ip = iron(&p, 3, &patch).unwrap();
        assert_eq!(ip.crease_times, vec![0, 3, 6, 7]);
        assert_eq!(ip.crease_number(), 3);
        let ip = iron(&p[..7], 3, &patch).unwrap();
        assert_eq!(ip.crease_times, vec![0, 3, 6]);
        assert_eq!(iron(&[5], 2, &patch).unwrap().crease_number(), 0);
    }
}
