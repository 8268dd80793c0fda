//! Exact and independent reference computations checked against the library.

mod common;

use std::collections::{HashSet, VecDeque};

use common::*;
use perclab::estimators::path_counting_bound;
use perclab::ghost::{est_pivotal_influence, est_pivotal_influence_graph, AtomKind, EventSpec, VertexSet};
use perclab::graph::Graph;
use perclab::{GraphFamily, GraphPatch};

// ---- growth ----

#[test]
fn hypercubic_growth_is_lattice_point_count() {
    for d in 1..=3 {
        let p = patch(&format!("hypercubic({d})"), 6);
        for n in 0..=6i64 {
            let mut count = 0u64;
            let range = -n..=n;
            let ys: Vec<i64> = if d >= 2 { range.clone().collect() } else { vec![0] };
            let zs: Vec<i64> = if d >= 3 { range.clone().collect() } else { vec![0] };
            for x in range.clone() {
                for &y in &ys {
                    for &z in &zs {
                        if x.abs() + y.abs() + z.abs() <= n {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(p.growth(n as usize).unwrap() as u64, count, "d = {d}, n = {n}");
        }
    }
    let z2 = patch("hypercubic(2)", 10);
    for n in 0..=10 {
        assert_eq!(z2.growth(n).unwrap(), 2 * n * n + 2 * n + 1);
    }
}

#[test]
fn tree_growth_closed_form() {
    for k in 3..=5usize {
        let p = patch(&format!("tree({k})"), 6);
        for n in 0..=6u32 {
            let expect = 1 + k * ((k - 1).pow(n) - 1) / (k - 2);
            assert_eq!(p.growth(n as usize).unwrap(), expect, "k = {k}, n = {n}");
        }
    }
}

#[test]
fn planar_lattice_growth() {
    let hex = patch("hexagonal", 12);
    let tri = patch("triangular", 12);
    for n in 0..=12 {
        assert_eq!(hex.growth(n).unwrap(), 1 + 3 * n * (n + 1) / 2, "hexagonal n = {n}");
        assert_eq!(tri.growth(n).unwrap(), 1 + 3 * n * (n + 1), "triangular n = {n}");
    }
}

#[test]
fn heisenberg_growth_matches_group_bfs() {
    type G = (i64, i64, i64);
    let mul = |g: G, h: G| (g.0 + h.0, g.1 + h.1, g.2 + h.2 + g.0 * h.1);
    let gens = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)];
    let r = 8;
    let mut seen: HashSet<G> = HashSet::from([(0, 0, 0)]);
    let mut frontier = vec![(0, 0, 0)];
    let mut growth = vec![1usize];
    for _ in 0..r {
        let mut next = Vec::new();
        for &g in &frontier {
            for &s in &gens {
                let h = mul(g, s);
                if seen.insert(h) {
                    next.push(h);
                }
            }
        }
        growth.push(seen.len());
        frontier = next;
    }
    let p = patch("heisenberg", r);
    for (n, &g) in growth.iter().enumerate() {
        assert_eq!(p.growth(n).unwrap(), g, "n = {n}");
    }
}

#[test]
fn interior_vertices_have_full_degree() {
    for fam in ["hypercubic(3)", "triangular", "hexagonal", "kagome312", "tree(4)", "heisenberg", "macrogrid(1)", "cylinder(5)", "slab(3,1,4)"] {
        let p = patch(fam, 6);
        let d = p.degree();
        for v in p.ball(5) {
            assert_eq!(p.graph().degree_of(v), d, "{fam} vertex {v}");
        }
        for (u, v) in p.graph().edges() {
            assert!(p.dist(*u as usize).abs_diff(p.dist(*v as usize)) <= 1, "{fam}");
        }
    }
}

#[test]
fn patch_distances_match_bfs() {
    for fam in ["kagome312", "macrogrid(1)", "heisenberg"] {
        let p = patch(fam, 5);
        let g = p.graph();
        let mut dist = vec![usize::MAX; g.vertex_count()];
        dist[p.root()] = 0;
        let mut q = VecDeque::from([p.root()]);
        while let Some(u) = q.pop_front() {
            for &(w, _) in g.neighbors(u) {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dist[u] + 1;
                    q.push_back(w as usize);
                }
            }
        }
        for v in 0..g.vertex_count() {
            assert_eq!(p.dist(v), dist[v], "{fam} vertex {v}");
        }
    }
}

// ---- self-avoiding walks ----

fn saw_counts(p: &GraphPatch, max_len: usize) -> Vec<u64> {
    fn go(p: &GraphPatch, v: usize, len: usize, max_len: usize, on: &mut Vec<bool>, counts: &mut [u64]) {
        if len == max_len {
            return;
        }
        for &(w, _) in p.graph().neighbors(v) {
            let w = w as usize;
            if !on[w] {
                counts[len + 1] += 1;
                on[w] = true;
                go(p, w, len + 1, max_len, on, counts);
                on[w] = false;
            }
        }
    }
    let mut counts = vec![0; max_len + 1];
    counts[0] = 1;
    let mut on = vec![false; p.vertex_count()];
    on[p.root()] = true;
    go(p, p.root(), 0, max_len, &mut on, &mut counts);
    counts
}

#[test]
fn square_lattice_saw_counts() {
    let p = patch("hypercubic(2)", 8);
    assert_eq!(saw_counts(&p, 7), vec![1, 4, 12, 36, 100, 284, 780, 2172]);
    // Each count is at most d (d-1)^(n-1).
    for (n, &c) in saw_counts(&p, 7).iter().enumerate().skip(1) {
        assert!(c <= 4 * 3u64.pow(n as u32 - 1));
    }
}

#[test]
fn path_counting_bound_dominates_exact_two_point() {
    let p = patch("hypercubic(2)", 2);
    let edges = p.graph().edges().to_vec();
    let n = p.vertex_count();
    for &q in &[0.05, 0.15, 0.3] {
        for v in [1, 5, 12] {
            let exact = enumerate(edges.len(), q, |mask| {
                let c = components(n, &edges, |e| bit(mask, e), |_| true);
                f64::from(c[0] == c[v])
            });
            let bound = path_counting_bound(q, 4, p.dist(v)).unwrap();
            assert!(exact <= bound, "p = {q}, v = {v}: {exact} > {bound}");
        }
    }
}

// ---- exact enumeration against Monte Carlo ----

fn check(cases: Vec<Case>) {
    for c in cases {
        assert!(c.agrees(), "{}: {} +- {} vs {}", c.name, c.estimate.mean, c.estimate.ci_halfwidth, c.exact);
    }
}

#[test]
fn two_point_matches_enumeration() {
    check(two_point_cases());
}

#[test]
fn piv_matches_enumeration() {
    check(piv_cases());
}

#[test]
fn two_ghost_matches_enumeration() {
    check(two_ghost_cases());
}

#[test]
fn ghost_connection_matches_enumeration() {
    check(ghost_connection_cases());
}

#[test]
fn gluing_matches_enumeration() {
    let cases = gluing_cases();
    assert!(cases[0].exact > 0.01);
    check(cases);
}

#[test]
fn union_find_partitions_match_bfs() {
    assert_eq!(partition_mismatches(1000), 0);
}

// ---- Russo derivative ----

#[test]
fn russo_on_a_three_edge_path() {
    let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 3)]);
    let event = EventSpec::Atom {
        kind: AtomKind::Connect,
        a: VertexSet::Vertices(vec![0]),
        b: VertexSet::Vertices(vec![3]),
        region: None,
    };
    let q: f64 = 0.6;
    let fd = ((q + 1e-6).powi(3) - (q - 1e-6).powi(3)) / 2e-6;
    let inf = est_pivotal_influence_graph(&g, q, 0.0, &event, 20_000, 1).unwrap();
    assert!(inf.russo.agrees_with(fd, 3.0), "{} vs {fd}", inf.russo.mean);
    for e in &inf.per_edge {
        assert!(e.agrees_with(q * q, 3.0));
    }
    assert!(inf.probability.agrees_with(q.powi(3), 3.0));
}

#[test]
fn russo_matches_finite_difference_of_enumeration() {
    let p = patch("hypercubic(2)", 2);
    let edges = p.graph().edges().to_vec();
    let n = p.vertex_count();
    let exact = |q: f64| {
        enumerate(edges.len(), q, |mask| {
            let c = components(n, &edges, |e| bit(mask, e), |_| true);
            f64::from(p.sphere(2).any(|v| c[v] == c[0]))
        })
    };
    let event = EventSpec::Atom { kind: AtomKind::Connect, a: VertexSet::Vertices(vec![0]), b: VertexSet::Sphere(2), region: None };
    let q = 0.5;
    let fd = (exact(q + 1e-5) - exact(q - 1e-5)) / 2e-5;
    let inf = est_pivotal_influence(&p, q, 0.0, &event, 20_000, 3).unwrap();
    assert!(inf.russo.agrees_with(fd, 3.0), "{} vs {fd}", inf.russo.mean);
    assert!(inf.probability.agrees_with(exact(q), 3.0));
}

#[test]
fn families_parse_round_trip() {
    for fam in ["hypercubic(2)", "tree(3)", "hexagonal", "kagome312", "heisenberg", "cylinder(4)", "macrogrid(2)"] {
        let f: GraphFamily = fam.parse().unwrap();
        let again: GraphFamily = f.to_string().parse().unwrap();
        assert_eq!(f, again);
    }
}
