use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::percolation::rng::{self, Domain};

/// Which of the two independent ghost streams to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GhostStream {
    A,
    B,
}

impl GhostStream {
    fn domain(self) -> Domain {
        match self {
            GhostStream::A => Domain::GhostA,
            GhostStream::B => Domain::GhostB,
        }
    }
}

/// A random subset of `support` containing each vertex independently with
/// probability `intensity`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostField {
    support: Vec<usize>,
    intensity: f64,
    included: Vec<usize>,
    seed: u64,
    replica: u64,
}

impl GhostField {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    /// Included vertices, in support order.
    pub fn included(&self) -> &[usize] {
        &self.included
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replica(&self) -> u64 {
        self.replica
    }

    pub fn is_empty(&self) -> bool {
        self.included.is_empty()
    }
}

pub(crate) fn check_intensity(h: f64) -> Result<()> {
    if (0.0..=1.0).contains(&h) {
        Ok(())
    } else {
        Err(Error::Domain(format!("ghost intensity must lie in [0,1], got {h}")))
    }
}

/// Per-vertex ghost uniforms for vertices `0..n`; vertex v is a ghost at
/// intensity h when its uniform is below h, so fields are nested in h.
pub(crate) fn ghost_uniforms(seed: u64, stream: GhostStream, replica: u64, n: usize) -> Vec<f64> {
    let mut u = vec![0.0; n];
    rng::fill_uniform(seed, stream.domain(), replica, &mut u);
    u
}

/// Included vertices of a support given the uniforms of [`ghost_uniforms`].
pub(crate) fn ghosts_of(support: &[usize], uniforms: &[f64], h: f64) -> Vec<usize> {
    support.iter().copied().filter(|&v| uniforms[v] < h).collect()
}

/// Ghost field of replica 0 on stream A.
pub fn sample_ghost(support: &[usize], h: f64, seed: u64) -> Result<GhostField> {
    sample_ghost_replica(support, h, seed, GhostStream::A, 0)
}

pub fn sample_ghost_replica(
    support: &[usize],
    h: f64,
    seed: u64,
    stream: GhostStream,
    replica: u64,
) -> Result<GhostField> {
    check_intensity(h)?;
    let n = support.iter().max().map_or(0, |&v| v + 1);
    let u = ghost_uniforms(seed, stream, replica, n);
    Ok(GhostField {
        support: support.to_vec(),
        intensity: h,
        included: ghosts_of(support, &u, h),
        seed,
        replica,
    })
}

/// Representation of edge and ghost variables by independent bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitsEncoding {
    /// Bits per edge.
    pub m_e: u32,
    pub q1: f64,
    pub q2: f64,
    /// Bits per ghost variable.
    pub m_g: u32,
}

const BITS_TOL: f64 = 1e-12;

pub fn bits_encoding(p1: f64, p2: f64, h: f64, d: usize) -> Result<BitsEncoding> {
    if d < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {d}")));
    }
    let df = d as f64;
    if !(p1 >= 1.0 / df && p1 < p2 && p2 < 1.0) {
        return Err(Error::Domain(format!("need 1/d <= p1 < p2 < 1, got p1 = {p1}, p2 = {p2}, d = {d}")));
    }
    if !(h > 0.0 && h <= 1.0 / df) {
        return Err(Error::Domain(format!("need 0 < h <= 1/d, got h = {h}")));
    }
    let base = (df - 1.0) / df;
    let ratio = (-p1).ln_1p() / base.ln();
    // Guard the floor against rounding just below an integer.
    let mut m_e = (ratio + 1e-9).floor().max(1.0) as u32;
    while m_e > 1 && base.powi(m_e as i32) < 1.0 - p1 {
        m_e -= 1;
    }
    let q = |p: f64| -(((-p).ln_1p() / m_e as f64).exp_m1());
    let (q1, q2) = (q(p1), q(p2));
    let mut m_g = (h.ln() / q1.ln() + 1e-9).floor() as u32;
    while m_g > 0 && q1.powi(m_g as i32) < h * (1.0 - BITS_TOL) {
        m_g -= 1;
    }
    let enc = BitsEncoding { m_e, q1, q2, m_g };
    enc.verify(p1, p2, h, d)?;
    Ok(enc)
}

impl BitsEncoding {
    /// Checks the defining identities and bounds.
    pub fn verify(&self, p1: f64, p2: f64, h: f64, d: usize) -> Result<()> {
        let df = d as f64;
        let back = |q: f64| -((self.m_e as f64) * (-q).ln_1p()).exp_m1();
        if (back(self.q1) - p1).abs() > BITS_TOL || (back(self.q2) - p2).abs() > BITS_TOL {
            return Err(Error::Invariant("edge bits do not reproduce p1, p2".into()));
        }
        if !(self.q1 >= 1.0 / df - BITS_TOL && self.q1 <= 2.0 / df + BITS_TOL) {
            return Err(Error::Invariant(format!("q1 = {} outside [1/d, 2/d]", self.q1)));
        }
        if h <= 1.0 / df && self.m_g < 1 {
            return Err(Error::Invariant("no ghost bits".into()));
        }
        if self.q1.powi(self.m_g as i32) < h * (1.0 - BITS_TOL) {
            return Err(Error::Invariant("ghost bits too weak".into()));
        }
        Ok(())
    }

    /// Probability that all ghost bits of a vertex are set.
    pub fn ghost_intensity(&self) -> f64 {
        self.q1.powi(self.m_g as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_intensities() {
        let a: Vec<usize> = (0..50).collect();
        assert_eq!(sample_ghost(&a, 1.0, 3).unwrap().included(), &a[..]);
        assert!(sample_ghost(&a, 0.0, 3).unwrap().is_empty());
        assert!(sample_ghost(&a, 1.5, 3).is_err());
    }

    #[test]
    fn nested_in_intensity() {
        let a: Vec<usize> = (0..200).step_by(3).collect();
        let lo = sample_ghost(&a, 0.2, 9).unwrap();
        let hi = sample_ghost(&a, 0.5, 9).unwrap();
        assert!(lo.included().iter().all(|v| hi.included().contains(v)));
    }

    #[test]
    fn encoding_examples() {
        let e = bits_encoding(0.5, 0.7, 0.25, 4).unwrap();
        assert_eq!(e.m_e, 2);
        assert!((e.q1 - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
        assert_eq!(e.m_g, 1);
        assert!(bits_encoding(0.2, 0.7, 0.25, 4).is_err());
        assert!(bits_encoding(0.5, 0.4, 0.25, 4).is_err());
        assert!(bits_encoding(0.5, 0.7, 0.3, 4).is_err());
    }

    #[test]
    fn encoding_at_lower_edge() {
        for d in 2..12 {
            let p1 = 1.0 / d as f64;
            let e = bits_encoding(p1, 0.99, p1, d).unwrap();
            assert_eq!(e.m_e, 1);
        }
    }
}
