use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{export_patch, geodesic, tube, GraphPatch, TubeSpec};
use crate::walks::coupling::coupled_pair_replica;
use crate::walks::iron::iron;
use crate::walks::walk::lazy_walk_replica;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TubeMode {
    /// Paths from S_n to S_{4n}.
    Radial { n: usize },
    /// Paths from the crossing `a` to the crossing `b`.
    Annular { n: usize, a: Vec<usize>, b: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Complete,
    Partial,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeFamily {
    pub mode: TubeMode,
    pub thickness: usize,
    pub tubes: Vec<TubeSpec>,
    pub target_k: usize,
    pub status: Construction,
}

impl TubeFamily {
    /// Tubes of thickness `r` around the given paths.
    pub fn from_paths(patch: &GraphPatch, mode: TubeMode, r: usize, paths: &[Vec<usize>]) -> Result<TubeFamily> {
        let tubes = paths.iter().map(|p| tube(p, r, patch)).collect::<Result<Vec<_>>>()?;
        let k = tubes.len();
        Ok(TubeFamily { mode, thickness: r, tubes, target_k: k, status: Construction::Complete })
    }

    pub fn achieved_k(&self) -> usize {
        self.tubes.len()
    }

    /// Longest path length.
    pub fn achieved_ell(&self) -> usize {
        self.tubes.iter().map(|t| t.length()).max().unwrap_or(0)
    }

    fn status_for(kept: usize, k: usize) -> Construction {
        if kept == 0 {
            Construction::Failed
        } else if kept >= k {
            Construction::Complete
        } else {
            Construction::Partial
        }
    }
}

/// First index at which the path reaches distance `d` from the root, from `from` on.
fn first_at(patch: &GraphPatch, path: &[usize], from: usize, d: usize) -> Option<usize> {
    (from..path.len()).find(|&i| patch.dist(path[i]) >= d)
}

/// Walks from k equidistant points of a root geodesic to S_n, ironed at
/// thickness r and clipped between their first visits to S_n and S_{4n}.
/// Tubes meeting an earlier kept tube are discarded; up to `attempts` rounds.
#[allow(clippy::too_many_arguments)]
pub fn build_radial_tubes(
    patch: &GraphPatch,
    n: usize,
    k: usize,
    r: usize,
    t: usize,
    seed: u64,
    attempts: usize,
) -> Result<TubeFamily> {
    if n == 0 || k == 0 {
        return Err(Error::Argument("need n, k >= 1".into()));
    }
    patch.check_radius(4 * n + r)?;
    let spine = geodesic(patch, patch.root(), patch.sphere(n).start)?;
    let starts: Vec<usize> = (0..k).map(|i| spine[if k == 1 { 0 } else { i * n / (k - 1) }]).collect();
    let mut kept: Vec<TubeSpec> = Vec::new();
    'rounds: for attempt in 0..attempts {
        for (i, &s) in starts.iter().enumerate() {
            if kept.len() >= k {
                break 'rounds;
            }
            let replica = (attempt * k + i) as u64;
            let walk = match lazy_walk_replica(patch, s, t, seed, replica) {
                Ok(w) => w,
                Err(Error::Truncation { .. }) => continue,
                Err(e) => return Err(e),
            };
            let ironed = if r == 0 { walk } else { iron(&walk, r, patch)?.ironed };
            let Some(a) = first_at(patch, &ironed, 0, n) else { continue };
            let Some(b) = first_at(patch, &ironed, a, 4 * n) else { continue };
            let cand = tube(&ironed[a..=b], r, patch)?;
            if kept.iter().all(|x| !x.intersects(&cand)) {
                kept.push(cand);
            }
        }
    }
    let status = TubeFamily::status_for(kept.len(), k);
    Ok(TubeFamily { mode: TubeMode::Radial { n }, thickness: r, tubes: kept, target_k: k, status })
}

/// Whether `set` contains a path from S_n to S_m.
pub fn is_crossing(patch: &GraphPatch, set: &[usize], n: usize, m: usize) -> bool {
    let mut inside = vec![false; patch.vertex_count()];
    for &v in set {
        if v < inside.len() {
            inside[v] = true;
        }
    }
    let sources: Vec<usize> = set.iter().copied().filter(|&v| v < inside.len() && patch.dist(v) == n).collect();
    let dist = patch.graph().bfs_from(&sources, |v| inside[v]);
    set.iter().any(|&v| v < inside.len() && patch.dist(v) == m && dist[v] != u32::MAX)
}

/// Smallest-index vertex of `set` whose distance from the root lies in [lo, hi].
fn anchor(patch: &GraphPatch, set: &[usize], lo: f64, hi: f64) -> Option<usize> {
    set.iter().copied().filter(|&v| (lo..=hi).contains(&(patch.dist(v) as f64))).min()
}

/// Coupled walk pairs between interleaved anchors a_i in A and b_i in B;
/// coalesced pairs give the path iron(X) followed by the reversal of iron(Y).
#[allow(clippy::too_many_arguments)]
pub fn build_annular_tubes(
    patch: &GraphPatch,
    a: &[usize],
    b: &[usize],
    n: usize,
    k: usize,
    r: usize,
    t: usize,
    seed: u64,
    attempts: usize,
) -> Result<TubeFamily> {
    if n == 0 || k == 0 {
        return Err(Error::Argument("need n, k >= 1".into()));
    }
    patch.check_radius(3 * n)?;
    for (name, set) in [("A", a), ("B", b)] {
        if !is_crossing(patch, set, n, 3 * n) {
            return Err(Error::Argument(format!("{name} is not an ({n}, {}) crossing", 3 * n)));
        }
    }
    let (nf, kf) = (n as f64, k as f64);
    let step = nf / (2.0 * kf);
    let mut anchors = Vec::with_capacity(k);
    for i in 1..=k {
        let i = i as f64;
        let ai = anchor(patch, a, nf + (4.0 * i - 4.0) * step, nf + (4.0 * i - 3.0) * step);
        let bi = anchor(patch, b, nf + (4.0 * i - 2.0) * step, nf + (4.0 * i - 1.0) * step);
        match (ai, bi) {
            (Some(x), Some(y)) => anchors.push((x, y)),
            _ => return Err(Error::Argument(format!("no anchor pair in the distance windows for k = {k}, n = {n}"))),
        }
    }
    let mut kept: Vec<TubeSpec> = Vec::new();
    let mut done = vec![false; k];
    for attempt in 0..attempts {
        for (i, &(x, y)) in anchors.iter().enumerate() {
            if done[i] {
                continue;
            }
            let pair = coupled_pair_replica(patch, x, y, t, seed, (attempt * k + i) as u64)?;
            if !pair.coalesced {
                continue;
            }
            let (px, py) = if r == 0 {
                (pair.walk_x, pair.walk_y)
            } else {
                (iron(&pair.walk_x, r, patch)?.ironed, iron(&pair.walk_y, r, patch)?.ironed)
            };
            let mut path = px;
            path.extend(py.iter().rev().skip(1));
            let cand = tube(&path, r, patch)?;
            if kept.iter().all(|z| !z.intersects(&cand)) {
                kept.push(cand);
                done[i] = true;
            }
        }
        if kept.len() >= k {
            break;
        }
    }
    let status = TubeFamily::status_for(kept.len(), k);
    Ok(TubeFamily {
        mode: TubeMode::Annular { n, a: a.to_vec(), b: b.to_vec() },
        thickness: r,
        tubes: kept,
        target_k: k,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlentifulCheck {
    pub count_ok: bool,
    pub disjoint_ok: bool,
    pub length_ok: bool,
    pub endpoints_ok: bool,
}

impl PlentifulCheck {
    pub fn holds(&self) -> bool {
        self.count_ok && self.disjoint_ok && self.length_ok && self.endpoints_ok
    }
}

/// Checks the family against (k, r, ell), recomputing the r-tubes.
pub fn verify_plentiful(patch: &GraphPatch, family: &TubeFamily, k: f64, r: usize, ell: f64) -> Result<PlentifulCheck> {
    let tubes: Vec<TubeSpec> = family.tubes.iter().map(|t| tube(&t.path, r, patch)).collect::<Result<_>>()?;
    let count_ok = tubes.len() as f64 >= k;
    let disjoint_ok = tubes.iter().enumerate().all(|(i, x)| tubes[i + 1..].iter().all(|y| !x.intersects(y)));
    let length_ok = tubes.iter().all(|t| t.length() as f64 <= ell);
    let endpoints_ok = tubes.iter().all(|t| {
        let (s, e) = (t.path[0], *t.path.last().unwrap());
        match &family.mode {
            TubeMode::Radial { n } => patch.dist(s) == *n && patch.dist(e) == 4 * n,
            TubeMode::Annular { a, b, .. } => a.contains(&s) && b.contains(&e),
        }
    });
    Ok(PlentifulCheck { count_ok, disjoint_ok, length_ok, endpoints_ok })
}

/// (k, r, ell) = ((log n)^{c lambda}, n (log n)^{-lambda/c}, n (log n)^{lambda/c}).
pub fn polylog_parameters(c: f64, lambda: f64, n: f64) -> Result<(f64, f64, f64)> {
    if !(c > 0.0 && lambda > 0.0 && n > 1.0) {
        return Err(Error::Domain(format!("need c, lambda > 0 and n > 1, got {c}, {lambda}, {n}")));
    }
    let l = n.ln();
    Ok((l.powf(c * lambda), n * l.powf(-lambda / c), n * l.powf(lambda / c)))
}

/// The patch text followed by one `tube` line (thickness and path) and one
/// `tube-set` line (tube vertices) per tube.
pub fn export_tubes(patch: &GraphPatch, family: &TubeFamily) -> String {
    let mut out = export_patch(patch);
    for (i, t) in family.tubes.iter().enumerate() {
        let path: Vec<String> = t.path.iter().map(|v| v.to_string()).collect();
        let set: Vec<String> = t.vertices.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("tube {i} {} {}\n", t.thickness, path.join(" ")));
        out.push_str(&format!("tube-set {i} {}\n", set.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn empty_family_and_shared_vertex() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        let mode = TubeMode::Radial { n: 1 };
        let empty = TubeFamily::from_paths(&patch, mode.clone(), 0, &[]).unwrap();
        assert!(verify_plentiful(&patch, &empty, 0.0, 0, 0.0).unwrap().holds());
        let s4 = patch.sphere(4).start;
        let p1 = geodesic(&patch, 0, s4).unwrap()[1..].to_vec();
        let p2 = p1.clone();
        let fam = TubeFamily::from_paths(&patch, mode, 0, &[p1, p2]).unwrap();
        let chk = verify_plentiful(&patch, &fam, 2.0, 0, 10.0).unwrap();
        assert!(chk.endpoints_ok && !chk.disjoint_ok && !chk.holds());
    }

    #[test]
    fn radial_builder_rechecks() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(3), 14).unwrap();
        let fam = build_radial_tubes(&patch, 2, 3, 1, 200, 4, 5).unwrap();
        assert!(fam.achieved_k() >= 1);
        let chk = verify_plentiful(&patch, &fam, fam.achieved_k() as f64, 1, fam.achieved_ell() as f64).unwrap();
        assert!(chk.holds(), "{chk:?}");
    }
}
