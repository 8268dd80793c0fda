use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphPatch;
use crate::percolation::{delta, sprinkle, DisjointSet, EdgeLabels};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelRow {
    pub i: usize,
    pub r: f64,
    pub q: f64,
    pub clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelTrace {
    pub m: usize,
    /// Effective scale used in the log factors.
    pub n: f64,
    pub k: usize,
    pub eps: f64,
    /// eps was reduced so that q_k stays at most p_end.
    pub eps_capped: bool,
    /// The radii dropped below 1 before step k.
    pub truncated: bool,
    pub rows: Vec<PeelRow>,
}

impl PeelTrace {
    pub fn sizes(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.clusters).collect()
    }

    pub fn final_size(&self) -> usize {
        self.rows.last().map_or(0, |r| r.clusters)
    }

    /// One `i r_i q_i |C_i|` line per step.
    pub fn to_rows(&self) -> String {
        let mut out = String::from("i r q clusters\n");
        for row in &self.rows {
            out.push_str(&format!("{} {} {} {}\n", row.i, row.r, row.q, row.clusters));
        }
        out
    }
}

/// Union-find over edges open at q with both ends in B_top.
fn forest(patch: &GraphPatch, labels: &EdgeLabels, q: f64, top: usize) -> DisjointSet {
    let end = patch.ball(top).end;
    let mut d = DisjointSet::new(end);
    for v in 0..end {
        for &(w, e) in patch.graph().neighbors(v) {
            let w = w as usize;
            if w > v && w < end && labels.is_open(e as usize, q) {
                d.union(v, w);
            }
        }
    }
    d
}

/// Smallest distance from the root in each cluster, indexed by cluster root.
fn min_dist(patch: &GraphPatch, d: &mut DisjointSet) -> Vec<usize> {
    let mut out = vec![usize::MAX; d.len()];
    for v in 0..d.len() {
        let r = d.find(v);
        out[r] = out[r].min(patch.dist(v));
    }
    out
}

/// Cluster counts |C_0|, ..., |C_k| on one labelled sample. C_0 holds the
/// clusters of B_{m/8} at q_0 meeting S_{r_0}; C_{i+1} holds the clusters at
/// q_{i+1} that contain some member of C_i meeting S_{r_{i+1}}. Spheres of
/// real radius r are read as S_{floor r}. `n` defaults to m^3.
pub fn orange_peel_trace(
    patch: &GraphPatch,
    m: usize,
    p_start: f64,
    p_end: f64,
    big_d: f64,
    n: Option<f64>,
    seed: u64,
) -> Result<PeelTrace> {
    let top = m / 8;
    patch.check_radius(top)?;
    if m < 8 {
        return Err(Error::Argument(format!("m = {m} leaves an empty ball B_(m/8)")));
    }
    if !(0.0..=1.0).contains(&p_start) || !(0.0..=1.0).contains(&p_end) || p_start > p_end {
        return Err(Error::Domain(format!("need 0 <= p_start <= p_end <= 1, got {p_start}, {p_end}")));
    }
    if !(big_d > 0.0) {
        return Err(Error::Domain(format!("growth exponent must be positive, got {big_d}")));
    }
    let n = n.unwrap_or((m as f64).powi(3));
    if !(n > std::f64::consts::E) {
        return Err(Error::Domain(format!("effective scale must exceed e, got {n}")));
    }
    let ln = n.ln();
    let k = 2 * ln.powf(big_d).floor() as usize;
    let mut eps = ln.powf(-(big_d + 1.0));
    let mut eps_capped = false;
    let interior = p_start > 0.0 && p_end < 1.0;
    if interior && k > 0 {
        let room = delta(p_start, p_end)? / k as f64;
        if eps > room {
            eps = room;
            eps_capped = true;
        }
    }
    let q_at = |i: usize| -> Result<f64> {
        if p_start <= 0.0 || p_start >= 1.0 {
            Ok(p_start)
        } else {
            sprinkle(p_start, i as f64 * eps)
        }
    };
    let mf = m as f64;
    let r_at = |i: usize| mf / 8.0 - i as f64 * mf / 40.0 * ln.powf(-big_d);

    let labels = EdgeLabels::sample(patch.graph(), seed, 0);
    let end = patch.ball(top).end;
    let r0 = r_at(0).floor() as usize;
    let q0 = q_at(0)?;
    let mut d = forest(patch, &labels, q0, top);
    // Members of C_i, one representative vertex each.
    let mut reps: Vec<usize> = Vec::new();
    let mut seen = vec![false; end];
    for v in patch.sphere(r0).filter(|&v| v < end) {
        let root = d.find(v);
        if !seen[root] {
            seen[root] = true;
            reps.push(v);
        }
    }
    let mut reach = min_dist(patch, &mut d);
    let mut rows = vec![PeelRow { i: 0, r: r_at(0), q: q0, clusters: reps.len() }];
    let mut truncated = false;
    for i in 1..=k {
        let r = r_at(i);
        if r < 1.0 {
            truncated = true;
            break;
        }
        let ri = r.floor() as usize;
        let q = q_at(i)?;
        // Every member of C_i meets S_{r_0}, so it meets S_{r_i} iff it gets at least as close.
        let touching: Vec<usize> = reps.iter().copied().filter(|&v| reach[d.find(v)] <= ri).collect();
        d = forest(patch, &labels, q, top);
        let mut seen = vec![false; end];
        reps.clear();
        for v in touching {
            let root = d.find(v);
            if !seen[root] {
                seen[root] = true;
                reps.push(v);
            }
        }
        reach = min_dist(patch, &mut d);
        rows.push(PeelRow { i, r, q, clusters: reps.len() });
    }
    for w in rows.windows(2) {
        if w[1].clusters > w[0].clusters {
            return Err(Error::Invariant("cluster count increased along the peel".into()));
        }
    }
    Ok(PeelTrace { m, n, k, eps, eps_capped, truncated, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn extremes() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        let full = orange_peel_trace(&patch, 64, 1.0, 1.0, 2.0, None, 1).unwrap();
        assert!(full.sizes().iter().all(|&c| c <= 1));
        let none = orange_peel_trace(&patch, 64, 0.0, 0.0, 2.0, None, 1).unwrap();
        assert_eq!(none.sizes()[0], patch.sphere(8).len());
        assert_eq!(none.final_size(), 0);
        let mid = orange_peel_trace(&patch, 64, 0.55, 0.65, 2.0, None, 4).unwrap();
        assert_eq!(mid.k, 2 * (64f64.powi(3).ln().powi(2)).floor() as usize);
        assert!(mid.sizes().windows(2).all(|w| w[1] <= w[0]));
    }
}
