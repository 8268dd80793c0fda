//! Named connection events and their pivotal edges.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! event := "connect(" set "," set ["," set] ")"      A <-> B, optionally inside a region
//!        | "ghost(" set "," set ["," set] ")"        ghosts on A <-> ghosts on B
//!        | "disconnect(" set "," set ["," set] ")"   complement of connect
//!        | "and(" event "," event ")" | "or(" event "," event ")" | "not(" event ")"
//! set   := INT | "{" INT {"," INT} "}" | "ball(" INT ")" | "sphere(" INT ")" | "all"
//! ```
//!
//! Only events in which every connection atom appears with positive polarity
//! are accepted by the pivotal estimator.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, collect_replicas, McEstimate};
use crate::ghost::field::{check_intensity, ghost_uniforms, GhostStream};
use crate::graph::{Graph, GraphPatch};
use crate::percolation::{DisjointSet, EdgeLabels};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexSet {
    Vertices(Vec<usize>),
    Ball(usize),
    Sphere(usize),
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Connect,
    Ghost,
    Disconnect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventSpec {
    Atom { kind: AtomKind, a: VertexSet, b: VertexSet, region: Option<VertexSet> },
    And(Box<EventSpec>, Box<EventSpec>),
    Or(Box<EventSpec>, Box<EventSpec>),
    Not(Box<EventSpec>),
}

impl EventSpec {
    /// Increasing in the edge configuration (and in the ghost fields).
    pub fn is_monotone(&self) -> bool {
        self.polarity_ok(true)
    }

    fn polarity_ok(&self, positive: bool) -> bool {
        match self {
            EventSpec::Atom { kind, .. } => match kind {
                AtomKind::Disconnect => !positive,
                _ => positive,
            },
            EventSpec::And(x, y) | EventSpec::Or(x, y) => x.polarity_ok(positive) && y.polarity_ok(positive),
            EventSpec::Not(x) => x.polarity_ok(!positive),
        }
    }

    pub fn uses_ghosts(&self) -> bool {
        match self {
            EventSpec::Atom { kind, .. } => *kind == AtomKind::Ghost,
            EventSpec::And(x, y) | EventSpec::Or(x, y) => x.uses_ghosts() || y.uses_ghosts(),
            EventSpec::Not(x) => x.uses_ghosts(),
        }
    }

    pub(crate) fn resolve(&self, n: usize, dist: Option<&[u32]>) -> Result<Resolved> {
        Ok(match self {
            EventSpec::Atom { kind, a, b, region } => {
                let a = resolve_set(a, n, dist)?;
                let b = resolve_set(b, n, dist)?;
                if a.is_empty() || b.is_empty() {
                    return Err(Error::Argument("event sets must be nonempty".into()));
                }
                let region = match region {
                    Some(s) => {
                        let mut m = vec![false; n];
                        for v in resolve_set(s, n, dist)? {
                            m[v] = true;
                        }
                        Some(m)
                    }
                    None => None,
                };
                Resolved::Atom { kind: *kind, a, b, region }
            }
            EventSpec::And(x, y) => Resolved::And(Box::new(x.resolve(n, dist)?), Box::new(y.resolve(n, dist)?)),
            EventSpec::Or(x, y) => Resolved::Or(Box::new(x.resolve(n, dist)?), Box::new(y.resolve(n, dist)?)),
            EventSpec::Not(x) => Resolved::Not(Box::new(x.resolve(n, dist)?)),
        })
    }
}

fn resolve_set(s: &VertexSet, n: usize, dist: Option<&[u32]>) -> Result<Vec<usize>> {
    let by_dist = |f: &dyn Fn(usize) -> bool| -> Result<Vec<usize>> {
        let d = dist.ok_or_else(|| Error::Argument("ball and sphere sets need a rooted patch".into()))?;
        Ok((0..n).filter(|&v| f(d[v] as usize)).collect())
    };
    match s {
        VertexSet::Vertices(vs) => {
            if let Some(&v) = vs.iter().find(|&&v| v >= n) {
                return Err(Error::Argument(format!("vertex {v} is not in the graph")));
            }
            Ok(vs.clone())
        }
        VertexSet::Ball(r) => by_dist(&|d| d <= *r),
        VertexSet::Sphere(r) => by_dist(&|d| d == *r),
        VertexSet::All => Ok((0..n).collect()),
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexSet::Vertices(vs) if vs.len() == 1 => write!(f, "{}", vs[0]),
            VertexSet::Vertices(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            VertexSet::Ball(r) => write!(f, "ball({r})"),
            VertexSet::Sphere(r) => write!(f, "sphere({r})"),
            VertexSet::All => write!(f, "all"),
        }
    }
}

impl fmt::Display for EventSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventSpec::Atom { kind, a, b, region } => {
                let name = match kind {
                    AtomKind::Connect => "connect",
                    AtomKind::Ghost => "ghost",
                    AtomKind::Disconnect => "disconnect",
                };
                write!(f, "{name}({a},{b}")?;
                if let Some(r) = region {
                    write!(f, ",{r}")?;
                }
                write!(f, ")")
            }
            EventSpec::And(x, y) => write!(f, "and({x},{y})"),
            EventSpec::Or(x, y) => write!(f, "or({x},{y})"),
            EventSpec::Not(x) => write!(f, "not({x})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in event", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }

    fn set(&mut self) -> Result<VertexSet> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(VertexSet::Vertices(vec![self.int()?])),
            Some(b'{') => {
                self.eat(b'{')?;
                let mut vs = vec![self.int()?];
                while self.peek() == Some(b',') {
                    self.eat(b',')?;
                    vs.push(self.int()?);
                }
                self.eat(b'}')?;
                Ok(VertexSet::Vertices(vs))
            }
            _ => {
                let name = self.ident();
                match name.as_str() {
                    "all" => Ok(VertexSet::All),
                    "ball" | "sphere" => {
                        self.eat(b'(')?;
                        let r = self.int()?;
                        self.eat(b')')?;
                        Ok(if name == "ball" { VertexSet::Ball(r) } else { VertexSet::Sphere(r) })
                    }
                    _ => Err(self.err(&format!("unknown set '{name}'"))),
                }
            }
        }
    }

    fn event(&mut self) -> Result<EventSpec> {
        let name = self.ident();
        self.eat(b'(')?;
        let ev = match name.as_str() {
            "connect" | "ghost" | "disconnect" => {
                let kind = match name.as_str() {
                    "connect" => AtomKind::Connect,
                    "ghost" => AtomKind::Ghost,
                    _ => AtomKind::Disconnect,
                };
                let a = self.set()?;
                self.eat(b',')?;
                let b = self.set()?;
                let region = if self.peek() == Some(b',') {
                    self.eat(b',')?;
                    Some(self.set()?)
                } else {
                    None
                };
                EventSpec::Atom { kind, a, b, region }
            }
            "and" | "or" => {
                let x = self.event()?;
                self.eat(b',')?;
                let y = self.event()?;
                if name == "and" {
                    EventSpec::And(Box::new(x), Box::new(y))
                } else {
                    EventSpec::Or(Box::new(x), Box::new(y))
                }
            }
            "not" => EventSpec::Not(Box::new(self.event()?)),
            _ => return Err(self.err(&format!("unknown event '{name}'"))),
        };
        self.eat(b')')?;
        Ok(ev)
    }
}

impl FromStr for EventSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let ev = p.event()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(ev)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Resolved {
    Atom { kind: AtomKind, a: Vec<usize>, b: Vec<usize>, region: Option<Vec<bool>> },
    And(Box<Resolved>, Box<Resolved>),
    Or(Box<Resolved>, Box<Resolved>),
    Not(Box<Resolved>),
}

/// One sampled world: edge states and the two ghost uniform fields.
pub(crate) struct World<'a> {
    pub graph: &'a Graph,
    pub open: &'a [bool],
    pub ghost_a: &'a [f64],
    pub ghost_b: &'a [f64],
    pub h: f64,
}

fn forest(graph: &Graph, open: &[bool], region: Option<&[bool]>) -> DisjointSet {
    let mut d = DisjointSet::new(graph.vertex_count());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if open[e] && region.is_none_or(|m| m[u as usize] && m[v as usize]) {
            d.union(u as usize, v as usize);
        }
    }
    d
}

impl Resolved {
    pub(crate) fn eval(&self, w: &World<'_>) -> bool {
        match self {
            Resolved::Atom { kind, a, b, region } => {
                let (a, b): (Vec<usize>, Vec<usize>) = match kind {
                    AtomKind::Ghost => (
                        a.iter().copied().filter(|&v| w.ghost_a[v] < w.h).collect(),
                        b.iter().copied().filter(|&v| w.ghost_b[v] < w.h).collect(),
                    ),
                    _ => (a.clone(), b.clone()),
                };
                let region = region.as_deref();
                let inside = |v: usize| region.is_none_or(|m| m[v]);
                let mut d = forest(w.graph, w.open, region);
                let joined = a.iter().filter(|&&x| inside(x)).any(|&x| {
                    b.iter().any(|&y| x == y || (inside(y) && d.same(x, y)))
                });
                if *kind == AtomKind::Disconnect {
                    !joined
                } else {
                    joined
                }
            }
            Resolved::And(x, y) => x.eval(w) && y.eval(w),
            Resolved::Or(x, y) => x.eval(w) || y.eval(w),
            Resolved::Not(x) => !x.eval(w),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PivotalInfluence {
    /// P(e pivotal) for every edge of the graph.
    pub per_edge: Vec<McEstimate>,
    pub max_edge: usize,
    pub max: McEstimate,
    /// Sum over edges of the pivotal probabilities (the p-derivative of P(A)).
    pub russo: McEstimate,
    pub probability: McEstimate,
}

/// Pivotal probabilities of a monotone event on a patch.
pub fn est_pivotal_influence(
    patch: &GraphPatch,
    p: f64,
    h: f64,
    event: &EventSpec,
    replicas: u64,
    seed: u64,
) -> Result<PivotalInfluence> {
    let resolved = event.resolve(patch.vertex_count(), Some(patch.distances()))?;
    pivotal_core(patch.graph(), &resolved, event, p, h, replicas, seed, patch.radius())
}

/// As [`est_pivotal_influence`] on an arbitrary graph; only explicit vertex
/// sets and `all` can be used.
pub fn est_pivotal_influence_graph(
    graph: &Graph,
    p: f64,
    h: f64,
    event: &EventSpec,
    replicas: u64,
    seed: u64,
) -> Result<PivotalInfluence> {
    let resolved = event.resolve(graph.vertex_count(), None)?;
    pivotal_core(graph, &resolved, event, p, h, replicas, seed, 0)
}

#[allow(clippy::too_many_arguments)]
fn pivotal_core(
    graph: &Graph,
    resolved: &Resolved,
    event: &EventSpec,
    p: f64,
    h: f64,
    replicas: u64,
    seed: u64,
    radius: usize,
) -> Result<PivotalInfluence> {
    check_replicas(replicas)?;
    check_intensity(h)?;
    if !event.is_monotone() {
        return Err(Error::NonMonotone(format!("event '{event}' is not increasing")));
    }
    if graph.edge_count() == 0 {
        return Err(Error::Argument("graph has no edges".into()));
    }
    let m = graph.edge_count();
    let n = graph.vertex_count();
    let ghosts = event.uses_ghosts();
    // Per replica: (event held, pivotal flags).
    let rows: Vec<(bool, Vec<bool>)> = collect_replicas(0..replicas, |r| {
        let labels = EdgeLabels::sample(graph, seed, r);
        let mut open: Vec<bool> = labels.values().iter().map(|&x| x <= p).collect();
        let (ga, gb) = if ghosts {
            (ghost_uniforms(seed, GhostStream::A, r, n), ghost_uniforms(seed, GhostStream::B, r, n))
        } else {
            (vec![1.0; n], vec![1.0; n])
        };
        let base = resolved.eval(&World { graph, open: &open, ghost_a: &ga, ghost_b: &gb, h });
        let mut piv = vec![false; m];
        for e in 0..m {
            let was = open[e];
            open[e] = true;
            let up = resolved.eval(&World { graph, open: &open, ghost_a: &ga, ghost_b: &gb, h });
            open[e] = false;
            let down = up && resolved.eval(&World { graph, open: &open, ghost_a: &ga, ghost_b: &gb, h });
            open[e] = was;
            piv[e] = up && !down;
        }
        (base, piv)
    });
    let mut counts = vec![0u64; m];
    let mut totals = Vec::with_capacity(rows.len());
    let mut held = 0u64;
    for (base, piv) in &rows {
        held += *base as u64;
        let mut t = 0u64;
        for (c, &x) in counts.iter_mut().zip(piv) {
            *c += x as u64;
            t += x as u64;
        }
        totals.push(t as f64);
    }
    let per_edge: Vec<McEstimate> =
        counts.iter().map(|&k| McEstimate::from_counts(k, replicas, seed, radius)).collect();
    let max_edge = (0..m).fold(0, |best, e| if counts[e] > counts[best] { e } else { best });
    Ok(PivotalInfluence {
        max: per_edge[max_edge].clone(),
        max_edge,
        per_edge,
        russo: McEstimate::from_samples(&totals, seed, radius),
        probability: McEstimate::from_counts(held, replicas, seed, radius),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["connect(0,5)", "ghost(ball(2),sphere(4),ball(4))", "or(connect({1,2},all),not(disconnect(0,3)))"] {
            let ev: EventSpec = s.parse().unwrap();
            assert_eq!(ev.to_string(), s);
            assert!(ev.is_monotone());
        }
        assert!(!"not(connect(0,1))".parse::<EventSpec>().unwrap().is_monotone());
        assert!(!"disconnect(0,1)".parse::<EventSpec>().unwrap().is_monotone());
        assert!("connect(0,)".parse::<EventSpec>().is_err());
        assert!("connect(0,1) x".parse::<EventSpec>().is_err());
    }

    #[test]
    fn single_edge_always_pivotal() {
        let g = Graph::from_edges(2, vec![(0, 1)]);
        let ev: EventSpec = "connect(0,1)".parse().unwrap();
        let out = est_pivotal_influence_graph(&g, 0.3, 0.0, &ev, 100, 1).unwrap();
        assert_eq!(out.max.mean, 1.0);
        assert_eq!(out.russo.mean, 1.0);
    }

    #[test]
    fn cycle_at_one_has_no_pivotals() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]);
        let ev: EventSpec = "connect(0,2)".parse().unwrap();
        let out = est_pivotal_influence_graph(&g, 1.0, 0.0, &ev, 50, 1).unwrap();
        assert!(out.per_edge.iter().all(|e| e.mean == 0.0));
    }

    #[test]
    fn non_monotone_rejected() {
        let g = Graph::from_edges(2, vec![(0, 1)]);
        let ev: EventSpec = "disconnect(0,1)".parse().unwrap();
        assert!(matches!(est_pivotal_influence_graph(&g, 0.5, 0.0, &ev, 10, 1), Err(Error::NonMonotone(_))));
    }
}
