use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphPatch;

/// The law of the lazy walk at a fixed time, as dense mass over patch vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkDistribution {
    pub start: usize,
    pub t: usize,
    pub mass: Vec<f64>,
    /// Probability that left the patch; zero for every exact kernel.
    pub truncation_mass: f64,
}

impl WalkDistribution {
    pub fn point(patch: &GraphPatch, start: usize) -> WalkDistribution {
        let mut mass = vec![0.0; patch.vertex_count()];
        mass[start] = 1.0;
        WalkDistribution { start, t: 0, mass, truncation_mass: 0.0 }
    }

    #[inline]
    pub fn at(&self, v: usize) -> f64 {
        self.mass[v]
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mass.iter().enumerate().filter(|(_, &m)| m > 0.0).map(|(v, _)| v)
    }

    pub fn max_mass(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }

    /// One lazy step; mass sent to neighbours missing from the patch is
    /// added to the truncation mass.
    pub fn step(&self, patch: &GraphPatch) -> WalkDistribution {
        let d = patch.degree() as f64;
        let g = patch.graph();
        let mut next = vec![0.0; self.mass.len()];
        let mut lost = self.truncation_mass;
        for (v, &m) in self.mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            next[v] += 0.5 * m;
            let share = 0.5 * m / d;
            let nbs = g.neighbors(v);
            for &(w, _) in nbs {
                next[w as usize] += share;
            }
            lost += share * (patch.degree() - nbs.len().min(patch.degree())) as f64;
        }
        WalkDistribution { start: self.start, t: self.t + 1, mass: next, truncation_mass: lost }
    }

    pub fn check_exact(&self) -> Result<()> {
        if self.truncation_mass > 0.0 {
            Err(Error::Truncation { mass: self.truncation_mass })
        } else {
            Ok(())
        }
    }
}

/// Laws at times 0..=t_max; fails if any mass leaves the patch.
pub fn kernel_sequence(patch: &GraphPatch, start: usize, t_max: usize) -> Result<Vec<WalkDistribution>> {
    patch.check_vertex(start)?;
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(WalkDistribution::point(patch, start));
    for _ in 0..t_max {
        let next = out.last().unwrap().step(patch);
        next.check_exact()?;
        out.push(next);
    }
    Ok(out)
}

/// Exact p_t(start, .).
pub fn heat_kernel_exact(patch: &GraphPatch, start: usize, t: usize) -> Result<WalkDistribution> {
    Ok(kernel_sequence(patch, start, t)?.pop().unwrap())
}

/// Shannon entropy in nats.
pub fn entropy(dist: &WalkDistribution) -> Result<f64> {
    dist.check_exact()?;
    Ok(-dist.mass.iter().filter(|&&m| m > 0.0).map(|&m| m * m.ln()).sum::<f64>())
}

/// Total variation distance between two laws on the same patch.
pub fn tv_distance(a: &WalkDistribution, b: &WalkDistribution) -> f64 {
    0.5 * a.mass.iter().zip(&b.mass).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Probability that the lazy step from `w` lands on `z`.
pub(crate) fn step_prob(patch: &GraphPatch, w: usize, z: usize) -> f64 {
    let d = patch.degree() as f64;
    let links = patch.graph().neighbors(w).iter().filter(|&&(x, _)| x as usize == z).count() as f64;
    let stay = if w == z { 0.5 } else { 0.0 };
    stay + 0.5 * links / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn one_and_two_steps() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 4).unwrap();
        let p1 = heat_kernel_exact(&patch, 0, 1).unwrap();
        assert_eq!(p1.at(0), 0.5);
        assert_eq!(p1.at(1), 0.125);
        let p2 = heat_kernel_exact(&patch, 0, 2).unwrap();
        assert!((p2.at(0) - 5.0 / 16.0).abs() < 1e-15);
        assert!((p2.total() - 1.0).abs() < 1e-12);
        assert!(matches!(heat_kernel_exact(&patch, 0, 5), Err(Error::Truncation { .. })));
    }

    #[test]
    fn entropy_values() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(3), 2).unwrap();
        assert_eq!(entropy(&WalkDistribution::point(&patch, 0)).unwrap(), 0.0);
        let h1 = entropy(&heat_kernel_exact(&patch, 0, 1).unwrap()).unwrap();
        assert!((h1 - (0.5 * 2f64.ln() + 0.5 * 12f64.ln())).abs() < 1e-12);
    }
}
