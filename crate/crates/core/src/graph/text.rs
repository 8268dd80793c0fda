//! Line-oriented patch format.
//!
//! ```text
//! perclab-patch 1
//! family hypercubic(2)
//! radius 1
//! degree 4
//! vertices 5
//! edges 4
//! v 0 0
//! v 1 1
//! ...
//! e 0 1
//! ...
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::family::GraphFamily;
use crate::graph::patch::GraphPatch;

const MAGIC: &str = "perclab-patch 1";

pub fn export_patch(patch: &GraphPatch) -> String {
    let mut out = String::with_capacity(16 * (patch.vertex_count() + patch.edge_count()) + 128);
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "family {}", patch.family());
    let _ = writeln!(out, "radius {}", patch.radius());
    let _ = writeln!(out, "degree {}", patch.degree());
    let _ = writeln!(out, "vertices {}", patch.vertex_count());
    let _ = writeln!(out, "edges {}", patch.edge_count());
    for v in 0..patch.vertex_count() {
        let _ = writeln!(out, "v {v} {}", patch.dist(v));
    }
    for &(u, v) in patch.graph().edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

fn header<'a>(line: Option<&'a str>, name: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing '{name}' header")))?;
    line.strip_prefix(name)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected '{name} ...', got '{line}'")))
}

fn number(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

fn pair(line: &str, tag: char) -> Result<(usize, usize)> {
    let mut it = line.split(' ');
    if it.next() != Some(&tag.to_string()[..]) {
        return Err(Error::Parse(format!("expected a '{tag}' line, got '{line}'")));
    }
    let a = number(it.next().unwrap_or(""))?;
    let b = number(it.next().unwrap_or(""))?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing fields in '{line}'")));
    }
    Ok((a, b))
}

/// Parses a patch and checks it against a fresh build of the same family and radius.
pub fn import_patch(text: &str) -> Result<GraphPatch> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(Error::Parse("not a perclab patch file".into()));
    }
    let family: GraphFamily = header(lines.next(), "family")?.parse()?;
    let radius = number(header(lines.next(), "radius")?)?;
    let degree = number(header(lines.next(), "degree")?)?;
    let nv = number(header(lines.next(), "vertices")?)?;
    let ne = number(header(lines.next(), "edges")?)?;
    let patch = GraphPatch::build(family, radius)?;
    if degree != patch.degree() || nv != patch.vertex_count() || ne != patch.edge_count() {
        return Err(Error::Parse(format!(
            "header counts ({degree}, {nv}, {ne}) do not match {family} at radius {radius}"
        )));
    }
    for v in 0..nv {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated vertex list".into()))?;
        let (id, d) = pair(line, 'v')?;
        if id != v || d != patch.dist(v) {
            return Err(Error::Parse(format!("vertex line '{line}' does not match the family")));
        }
    }
    for e in 0..ne {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated edge list".into()))?;
        let (a, b) = pair(line, 'e')?;
        if (a, b) != patch.graph().edge(e) {
            return Err(Error::Parse(format!("edge line '{line}' does not match the family")));
        }
    }
    if let Some(extra) = lines.find(|l| !l.is_empty()) {
        return Err(Error::Parse(format!("unexpected trailing line '{extra}'")));
    }
    Ok(patch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_exact() {
        let p = GraphPatch::build(GraphFamily::Hexagonal, 4).unwrap();
        let text = export_patch(&p);
        let q = import_patch(&text).unwrap();
        assert_eq!(export_patch(&q), text);
    }

    #[test]
    fn tampered_edges_rejected() {
        let p = GraphPatch::build(GraphFamily::HyperCubic(2), 1).unwrap();
        let text = export_patch(&p).replace("e 0 1", "e 0 2");
        assert!(matches!(import_patch(&text), Err(Error::Parse(_))));
    }
}
