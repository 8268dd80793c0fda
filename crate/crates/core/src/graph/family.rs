//! The named transitive graphs and their local neighbour rules.
//!
//! Every family is described by a root key and a function listing the
//! neighbours of a key in a fixed order. Patches are grown from these two
//! pieces alone, so the order here determines vertex and edge indexing.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Coordinates of a vertex in the infinite graph.
pub type Key = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphFamily {
    /// The hypercubic lattice Z^d.
    HyperCubic(usize),
    /// Z^(dim - periodic) x (Z/period Z)^periodic.
    Slab {
        dim: usize,
        periodic: usize,
        period: usize,
    },
    /// Z x (Z/m Z).
    Cylinder(usize),
    Triangular,
    /// The honeycomb lattice.
    Hexagonal,
    /// The 3-12 (super-kagome) lattice: every honeycomb vertex blown up into a triangle.
    Kagome312,
    /// The regular tree of the given degree.
    RegularTree(usize),
    /// Cayley graph of the integer Heisenberg group with generators x^{+-1}, y^{+-1}.
    Heisenberg3,
    /// Copies of the complete graph K_{4n} at the sites of Z^2, glued along grid bonds.
    MacroGrid(usize),
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

impl GraphFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GraphFamily::HyperCubic(d) if d == 0 => {
                Err(Error::Parameter("hypercubic dimension must be at least 1".into()))
            }
            GraphFamily::Slab { dim, periodic, period } => {
                if dim == 0 {
                    Err(Error::Parameter("slab dimension must be at least 1".into()))
                } else if periodic > dim {
                    Err(Error::Parameter(format!(
                        "slab has {periodic} periodic directions but only {dim} dimensions"
                    )))
                } else if period == 0 {
                    Err(Error::Parameter("slab period must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
            GraphFamily::Cylinder(0) => Err(Error::Parameter("cylinder circumference must be at least 1".into())),
            GraphFamily::RegularTree(k) if k < 3 => Err(Error::Parameter(format!(
                "regular tree degree must be at least 3, got {k}"
            ))),
            GraphFamily::MacroGrid(0) => Err(Error::Parameter("macro grid clique parameter must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// Vertex degree of the infinite graph.
    pub fn degree(&self) -> usize {
        match *self {
            GraphFamily::HyperCubic(d) => 2 * d,
            GraphFamily::Slab { dim, periodic, period } => 2 * (dim - periodic) + periodic * cycle_degree(period),
            GraphFamily::Cylinder(m) => 2 + cycle_degree(m),
            GraphFamily::Triangular => 6,
            GraphFamily::Hexagonal | GraphFamily::Kagome312 => 3,
            GraphFamily::RegularTree(k) => k,
            GraphFamily::Heisenberg3 => 4,
            GraphFamily::MacroGrid(n) => 4 * n,
        }
    }

    /// Families with a planar embedding usable for box-crossing criteria.
    pub fn is_planar(&self) -> bool {
        matches!(
            self,
            GraphFamily::HyperCubic(2) | GraphFamily::Triangular | GraphFamily::Hexagonal | GraphFamily::Kagome312
        )
    }

    pub fn is_infinite(&self) -> bool {
        match *self {
            GraphFamily::Slab { dim, periodic, .. } => periodic < dim,
            _ => true,
        }
    }

    pub fn root(&self) -> Key {
        match *self {
            GraphFamily::HyperCubic(d) => vec![0; d],
            GraphFamily::Slab { dim, .. } => vec![0; dim],
            GraphFamily::Cylinder(_) | GraphFamily::Triangular => vec![0, 0],
            GraphFamily::Hexagonal | GraphFamily::Heisenberg3 | GraphFamily::MacroGrid(_) => vec![0, 0, 0],
            GraphFamily::Kagome312 => vec![0, 0, 0, 0],
            GraphFamily::RegularTree(_) => Vec::new(),
        }
    }

    /// Appends the neighbours of `key` to `out` in the family's fixed order.
    pub fn neighbors(&self, key: &[i64], out: &mut Vec<Key>) {
        match *self {
            GraphFamily::HyperCubic(d) => lattice_neighbors(key, d, 0, 1, out),
            GraphFamily::Slab { dim, periodic, period } => {
                lattice_neighbors(key, dim - periodic, periodic, period, out)
            }
            GraphFamily::Cylinder(m) => lattice_neighbors(key, 1, 1, m, out),
            GraphFamily::Triangular => {
                let (x, y) = (key[0], key[1]);
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                    out.push(vec![x + dx, y + dy]);
                }
            }
            GraphFamily::Hexagonal => {
                let (x, y, s) = (key[0], key[1], key[2]);
                if s == 0 {
                    out.push(vec![x, y, 1]);
                    out.push(vec![x - 1, y, 1]);
                    out.push(vec![x, y - 1, 1]);
                } else {
                    out.push(vec![x, y, 0]);
                    out.push(vec![x + 1, y, 0]);
                    out.push(vec![x, y + 1, 0]);
                }
            }
            GraphFamily::Kagome312 => {
                let (x, y, s, j) = (key[0], key[1], key[2], key[3]);
                out.push(vec![x, y, s, (j + 1) % 3]);
                out.push(vec![x, y, s, (j + 2) % 3]);
                let (dx, dy) = match j {
                    0 => (0, 0),
                    1 => (1, 0),
                    _ => (0, 1),
                };
                if s == 0 {
                    out.push(vec![x - dx, y - dy, 1, j]);
                } else {
                    out.push(vec![x + dx, y + dy, 0, j]);
                }
            }
            GraphFamily::RegularTree(k) => {
                if !key.is_empty() {
                    out.push(key[..key.len() - 1].to_vec());
                }
                let children = if key.is_empty() { k } else { k - 1 };
                for c in 0..children as i64 {
                    let mut child = key.to_vec();
                    child.push(c);
                    out.push(child);
                }
            }
            GraphFamily::Heisenberg3 => {
                let (a, b, c) = (key[0], key[1], key[2]);
                out.push(vec![a + 1, b, c]);
                out.push(vec![a - 1, b, c]);
                out.push(vec![a, b + 1, c + a]);
                out.push(vec![a, b - 1, c - a]);
            }
            GraphFamily::MacroGrid(n) => {
                let (x, y, i) = (key[0], key[1], key[2]);
                let size = 4 * n as i64;
                for j in 0..size {
                    if j != i {
                        out.push(vec![x, y, j]);
                    }
                }
                // Clique vertex i carries the bond in direction i mod 4; slots rotate evenly.
                let dir = i % 4;
                let slot = i / 4;
                let (dx, dy) = [(1, 0), (0, 1), (-1, 0), (0, -1)][dir as usize];
                out.push(vec![x + dx, y + dy, 4 * slot + (dir + 2) % 4]);
            }
        }
    }

    /// Euclidean position of a vertex, for planar families, in units of the bond length.
    pub fn embed(&self, key: &[i64]) -> Option<(f64, f64)> {
        match *self {
            GraphFamily::HyperCubic(2) => Some((key[0] as f64, key[1] as f64)),
            GraphFamily::Triangular => {
                let (x, y) = (key[0] as f64, key[1] as f64);
                Some((x + 0.5 * y, 0.5 * SQRT3 * y))
            }
            GraphFamily::Hexagonal => Some(honeycomb_position(key[0], key[1], key[2])),
            GraphFamily::Kagome312 => {
                let (cx, cy) = honeycomb_position(key[0], key[1], key[2]);
                let dir = honeycomb_bond_direction(key[2], key[3]);
                // Triangle side equals the remaining bond length when the cut is at 1/(2+sqrt 3);
                // rescale so that this common bond length is 1.
                let t = 1.0 / (2.0 + SQRT3);
                let scale = (2.0 + SQRT3) / SQRT3;
                Some(((cx + t * dir.0) * scale, (cy + t * dir.1) * scale))
            }
            _ => None,
        }
    }

    /// Exact ball size of the infinite graph when a closed form is known.
    pub fn growth_formula(&self, n: usize) -> Option<u128> {
        match *self {
            GraphFamily::HyperCubic(d) => {
                // |B_n| = sum_k 2^k C(d,k) C(n,k)
                let mut total: u128 = 0;
                for k in 0..=d.min(n) {
                    let term = binomial(d as u128, k as u128)?
                        .checked_mul(binomial(n as u128, k as u128)?)?
                        .checked_mul(1u128.checked_shl(k as u32)?)?;
                    total = total.checked_add(term)?;
                }
                Some(total)
            }
            GraphFamily::RegularTree(k) => {
                // 1 + k((k-1)^n - 1)/(k-2)
                let k = k as u128;
                let pow = (k - 1).checked_pow(n as u32)?;
                Some(1 + k * (pow - 1) / (k - 2))
            }
            _ => None,
        }
    }
}

fn cycle_degree(m: usize) -> usize {
    match m {
        1 => 0,
        2 => 1,
        _ => 2,
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn lattice_neighbors(key: &[i64], free: usize, periodic: usize, period: usize, out: &mut Vec<Key>) {
    for i in 0..free {
        for step in [1, -1] {
            let mut k = key.to_vec();
            k[i] += step;
            out.push(k);
        }
    }
    let m = period as i64;
    for i in free..free + periodic {
        let up = (key[i] + 1).rem_euclid(m);
        let down = (key[i] - 1).rem_euclid(m);
        if up != key[i] {
            let mut k = key.to_vec();
            k[i] = up;
            out.push(k);
        }
        if down != key[i] && down != up {
            let mut k = key.to_vec();
            k[i] = down;
            out.push(k);
        }
    }
}

fn honeycomb_position(x: i64, y: i64, s: i64) -> (f64, f64) {
    let (x, y) = (x as f64, y as f64);
    let px = x * SQRT3 + y * 0.5 * SQRT3;
    let py = y * 1.5;
    if s == 0 {
        (px, py)
    } else {
        (px + 0.5 * SQRT3, py + 0.5)
    }
}

fn honeycomb_bond_direction(s: i64, j: i64) -> (f64, f64) {
    let h = 0.5 * SQRT3;
    match (s, j) {
        (0, 0) => (h, 0.5),
        (0, 1) => (-h, 0.5),
        (0, _) => (0.0, -1.0),
        (_, 0) => (-h, -0.5),
        (_, 1) => (h, -0.5),
        _ => (0.0, 1.0),
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphFamily::HyperCubic(d) => write!(f, "hypercubic({d})"),
            GraphFamily::Slab { dim, periodic, period } => write!(f, "slab({dim},{periodic},{period})"),
            GraphFamily::Cylinder(m) => write!(f, "cylinder({m})"),
            GraphFamily::Triangular => write!(f, "triangular"),
            GraphFamily::Hexagonal => write!(f, "hexagonal"),
            GraphFamily::Kagome312 => write!(f, "kagome312"),
            GraphFamily::RegularTree(k) => write!(f, "tree({k})"),
            GraphFamily::Heisenberg3 => write!(f, "heisenberg3"),
            GraphFamily::MacroGrid(n) => write!(f, "macrogrid({n})"),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .rfind(')')
                    .filter(|&c| c > open)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in family '{s}'")))?;
                let args = s[open + 1..close]
                    .split(',')
                    .map(|a| {
                        a.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad family parameter '{a}' in '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (s[..open].trim().to_string(), args)
            }
            None => (s.clone(), Vec::new()),
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("family '{name}' takes {n} parameter(s), got {}", args.len())))
            }
        };
        let family = match name.as_str() {
            "hypercubic" | "z" => {
                arity(1)?;
                GraphFamily::HyperCubic(args[0])
            }
            "z2" => GraphFamily::HyperCubic(2),
            "z3" => GraphFamily::HyperCubic(3),
            "slab" => {
                arity(3)?;
                GraphFamily::Slab { dim: args[0], periodic: args[1], period: args[2] }
            }
            "cylinder" => {
                arity(1)?;
                GraphFamily::Cylinder(args[0])
            }
            "triangular" => GraphFamily::Triangular,
            "hexagonal" | "honeycomb" => GraphFamily::Hexagonal,
            "kagome312" | "3-12" | "super-kagome" => GraphFamily::Kagome312,
            "tree" | "regulartree" => {
                arity(1)?;
                GraphFamily::RegularTree(args[0])
            }
            "heisenberg3" | "heisenberg" => GraphFamily::Heisenberg3,
            "macrogrid" => {
                arity(1)?;
                GraphFamily::MacroGrid(args[0])
            }
            other => return Err(Error::Parse(format!("unknown graph family '{other}'"))),
        };
        family.validate()?;
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_roundtrip() {
        for fam in [
            GraphFamily::HyperCubic(3),
            GraphFamily::Slab { dim: 3, periodic: 1, period: 4 },
            GraphFamily::Cylinder(8),
            GraphFamily::Triangular,
            GraphFamily::Hexagonal,
            GraphFamily::Kagome312,
            GraphFamily::RegularTree(3),
            GraphFamily::Heisenberg3,
            GraphFamily::MacroGrid(2),
        ] {
            assert_eq!(fam.to_string().parse::<GraphFamily>().unwrap(), fam);
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(matches!("tree(2)".parse::<GraphFamily>(), Err(Error::Parameter(_))));
        assert!(matches!("slab(2,3,4)".parse::<GraphFamily>(), Err(Error::Parameter(_))));
        assert!(matches!("cylinder(0)".parse::<GraphFamily>(), Err(Error::Parameter(_))));
        assert!("moebius".parse::<GraphFamily>().is_err());
    }

    #[test]
    fn neighbour_lists_have_family_degree() {
        let mut out = Vec::new();
        for fam in [
            GraphFamily::Slab { dim: 3, periodic: 1, period: 2 },
            GraphFamily::Slab { dim: 3, periodic: 1, period: 1 },
            GraphFamily::Kagome312,
            GraphFamily::MacroGrid(3),
        ] {
            out.clear();
            fam.neighbors(&fam.root(), &mut out);
            assert_eq!(out.len(), fam.degree(), "{fam}");
        }
    }

    #[test]
    fn kagome_embedding_has_unit_cell_bonds() {
        let fam = GraphFamily::Kagome312;
        let root = fam.root();
        let p = fam.embed(&root).unwrap();
        let mut out = Vec::new();
        fam.neighbors(&root, &mut out);
        let lens: Vec<f64> = out
            .iter()
            .map(|k| {
                let q = fam.embed(k).unwrap();
                ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
            })
            .collect();
        for l in &lens {
            assert!((l - 1.0).abs() < 1e-12, "{lens:?}");
        }
    }

    #[test]
    fn growth_formulas() {
        assert_eq!(GraphFamily::HyperCubic(2).growth_formula(2), Some(13));
        assert_eq!(GraphFamily::RegularTree(3).growth_formula(4), Some(3 * 16 - 2));
        assert_eq!(GraphFamily::Heisenberg3.growth_formula(2), None);
    }
}
