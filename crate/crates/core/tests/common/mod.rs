//! Exhaustive-enumeration references shared by the oracle and acceptance tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use perclab::estimators::{est_piv, est_two_ghost, est_two_point, root_edge, McEstimate};
use perclab::ghost::{est_ghost_connection, gluing_event_prob};
use perclab::percolation::{open_forest, EdgeLabels, VertexMask};
use perclab::GraphPatch;

pub const REPLICAS: u64 = 20_000;

pub fn patch(family: &str, r: usize) -> GraphPatch {
    GraphPatch::build(family.parse().unwrap(), r).unwrap()
}

/// Component label of every vertex, using only open edges with both ends allowed.
pub fn components(n: usize, edges: &[(u32, u32)], open: impl Fn(usize) -> bool, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        let (u, v) = (u as usize, v as usize);
        if open(e) && allowed(u) && allowed(v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    q.push_back(w);
                }
            }
        }
    }
    comp
}

/// Sum of weight(config) * event(config) over all 2^m configurations.
pub fn enumerate(m: usize, p: f64, event: impl Fn(u32) -> f64) -> f64 {
    assert!(m <= 20);
    (0u32..1 << m)
        .map(|mask| {
            let k = mask.count_ones() as i32;
            p.powi(k) * (1.0 - p).powi(m as i32 - k) * event(mask)
        })
        .sum()
}

pub fn bit(mask: u32, e: usize) -> bool {
    mask >> e & 1 == 1
}

/// One Monte Carlo estimate next to its exact value.
pub struct Case {
    pub name: String,
    pub estimate: McEstimate,
    pub exact: f64,
}

impl Case {
    pub fn agrees(&self) -> bool {
        self.estimate.agrees_with(self.exact, 3.0)
    }
}

pub fn two_point_cases() -> Vec<Case> {
    let p = patch("hypercubic(2)", 2);
    let edges = p.graph().edges().to_vec();
    let n = p.vertex_count();
    let inner = VertexMask::ball(&p, 1);
    [(0.5, 12usize, false), (0.7, 6, false), (0.6, 3, true)]
        .iter()
        .map(|&(q, v, restrict)| {
            let exact = enumerate(edges.len(), q, |mask| {
                let c = components(n, &edges, |e| bit(mask, e), |u| !restrict || inner.contains(u));
                f64::from(c[0] == c[v])
            });
            let estimate = est_two_point(&p, q, &[0], &[v], restrict.then_some(&inner), REPLICAS, 5).unwrap();
            Case { name: format!("two-point p={q} v={v} restricted={restrict}"), estimate, exact }
        })
        .collect()
}

pub fn piv_cases() -> Vec<Case> {
    let p = patch("hypercubic(2)", 2);
    let edges = p.graph().edges().to_vec();
    let n = p.vertex_count();
    let (m, r) = (1, 2);
    [0.3, 0.5, 0.7]
        .iter()
        .map(|&q| {
            let exact = enumerate(edges.len(), q, |mask| {
                let c = components(n, &edges, |e| bit(mask, e), |_| true);
                let mut good: Vec<usize> = (0..n)
                    .filter(|&u| p.dist(u) == m && (0..n).any(|w| p.dist(w) == r && c[w] == c[u]))
                    .map(|u| c[u])
                    .collect();
                good.sort_unstable();
                good.dedup();
                f64::from(good.len() >= 2)
            });
            let estimate = est_piv(&p, q, m, r, REPLICAS, 8, None).unwrap().estimate;
            Case { name: format!("piv p={q}"), estimate, exact }
        })
        .collect()
}

pub fn two_ghost_cases() -> Vec<Case> {
    let p = patch("hypercubic(2)", 2);
    let edges = p.graph().edges().to_vec();
    let nv = p.vertex_count();
    let e0 = root_edge(&p).unwrap();
    let (x, y) = p.graph().edge(e0);
    [(0.5, 2usize), (0.7, 3), (0.8, 2)]
        .iter()
        .map(|&(q, size)| {
            let exact = enumerate(edges.len(), q, |mask| {
                if bit(mask, e0) {
                    return 0.0;
                }
                let c = components(nv, &edges, |e| bit(mask, e), |_| true);
                if c[x] == c[y] {
                    return 0.0;
                }
                let size_of = |v: usize| (0..nv).filter(|&u| c[u] == c[v]).count();
                let free = |v: usize| !(0..nv).any(|u| c[u] == c[v] && p.dist(u) == p.radius());
                f64::from(size_of(x) >= size && size_of(y) >= size && (free(x) || free(y)))
            });
            let estimate = est_two_ghost(&p, q, size, REPLICAS, 2).unwrap();
            Case { name: format!("two-ghost p={q} n={size}"), estimate, exact }
        })
        .collect()
}

pub fn ghost_connection_cases() -> Vec<Case> {
    let p = patch("hypercubic(2)", 2);
    let edges = p.graph().edges().to_vec();
    let n = p.vertex_count();
    let (a, b) = ([5usize, 6], [9usize, 12]);
    [(0.5f64, 0.3f64), (0.7, 0.6)]
        .iter()
        .map(|&(q, h)| {
            let exact = enumerate(edges.len(), q, |mask| {
                let c = components(n, &edges, |e| bit(mask, e), |_| true);
                // Marginalise the ghosts over their 16 joint outcomes.
                let mut total = 0.0;
                for g in 0u32..16 {
                    let ga: Vec<usize> = (0..2).filter(|&i| bit(g, i)).map(|i| a[i]).collect();
                    let gb: Vec<usize> = (0..2).filter(|&i| bit(g, i + 2)).map(|i| b[i]).collect();
                    let w = h.powi(g.count_ones() as i32) * (1.0 - h).powi(4 - g.count_ones() as i32);
                    if ga.iter().any(|&u| gb.iter().any(|&v| c[u] == c[v])) {
                        total += w;
                    }
                }
                total
            });
            let estimate = est_ghost_connection(&p, q, &a, &b, h, None, REPLICAS, 4).unwrap();
            Case { name: format!("ghost-connection p={q} h={h}"), estimate, exact }
        })
        .collect()
}

/// Three states per edge: open at p1, open only at p2, closed.
pub fn gluing_cases() -> Vec<Case> {
    let p = patch("tree(3)", 2);
    let edges = p.graph().edges().to_vec();
    let m = edges.len();
    let n = p.vertex_count();
    let lambda = VertexMask::ball(&p, 1);
    let outer = VertexMask::ball(&p, 2);
    let (a, x, y) = (vec![0usize, 1], vec![p.sphere(2).start], vec![2usize]);
    let (p1, p2, h): (f64, f64, f64) = (0.4, 0.7, 0.5);
    let mut exact = 0.0;
    for code in 0..3usize.pow(m as u32) {
        let mut state = vec![0u8; m];
        let mut c = code;
        let mut w = 1.0;
        for s in state.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
            w *= [p1, p2 - p1, 1.0 - p2][*s as usize];
        }
        let c2 = components(n, &edges, |e| state[e] <= 1, |u| outer.contains(u));
        let c1 = components(n, &edges, |e| state[e] == 0, |u| lambda.contains(u));
        let joined = |c: &[usize], s: &[usize], t: &[usize]| s.iter().any(|&u| t.iter().any(|&v| c[u] == c[v]));
        for g in 1u32..4 {
            let ga: Vec<usize> = (0..2).filter(|&i| bit(g, i)).map(|i| a[i]).collect();
            let gw = h.powi(g.count_ones() as i32) * (1.0 - h).powi(2 - g.count_ones() as i32);
            if joined(&c2, &x, &ga) && !joined(&c2, &x, &y) && joined(&c1, &y, &ga) {
                exact += w * gw;
            }
        }
    }
    let estimate = gluing_event_prob(&p, p1, p2, h, &a, &x, &y, &lambda, Some(1), REPLICAS, 6).unwrap().estimate;
    vec![Case { name: format!("gluing p1={p1} p2={p2} h={h}"), estimate, exact }]
}

pub fn all_cases() -> Vec<Case> {
    let mut out = two_point_cases();
    out.extend(piv_cases());
    out.extend(two_ghost_cases());
    out.extend(ghost_connection_cases());
    out.extend(gluing_cases());
    out
}

/// Number of the `configs` random configurations (per family) whose
/// union-find partition differs from BFS flood fill.
pub fn partition_mismatches(configs: u64) -> usize {
    let mut bad = 0;
    for fam in ["hypercubic(2)", "hexagonal", "tree(3)"] {
        let p = patch(fam, 4);
        let g = p.graph();
        for rep in 0..configs {
            let labels = EdgeLabels::sample(g, 3, rep);
            let q = 0.2 + 0.6 * (rep % 7) as f64 / 6.0;
            let mut d = open_forest(g, &labels, q);
            let got = d.partition();
            let comp = components(g.vertex_count(), g.edges(), |e| labels.is_open(e, q), |_| true);
            let same = (0..g.vertex_count()).all(|u| (0..g.vertex_count()).all(|v| (got[u] == got[v]) == (comp[u] == comp[v])));
            if !same || d.components() != comp.iter().enumerate().filter(|&(v, &c)| v == c).count() {
                bad += 1;
            }
        }
    }
    bad
}
