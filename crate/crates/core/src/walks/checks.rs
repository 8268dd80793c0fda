use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_events, McEstimate};
use crate::graph::GraphPatch;
use crate::walks::iron::crease_times;
use crate::walks::kernel::{entropy, kernel_sequence, tv_distance, WalkDistribution};
use crate::walks::walk::lazy_walk_replica;

/// Slack for floating comparisons against the exact bounds.
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub v: usize,
    pub t: usize,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeRow {
    pub t: usize,
    pub n: usize,
    /// P(max_{k <= t} d(o, X_k) >= n).
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcReport {
    pub t_max: usize,
    /// Every (v, t) comparison from the root, 1 <= t <= t_max.
    pub rows: Vec<KernelRow>,
    pub violations: usize,
    pub escape: Vec<EscapeRow>,
    pub escape_violations: usize,
}

/// Compares exact kernels from the root with the Gaussian off-diagonal bound
/// 2 sqrt(deg v / deg u) exp(-d^2 / 2t), and exact ball-escape probabilities
/// with 2(t+1) Gr(n) exp(-n^2 / 2t). All vertices have the same degree.
pub fn vc_check(patch: &GraphPatch, t_max: usize) -> Result<VcReport> {
    patch.check_radius(t_max)?;
    let o = patch.root();
    let laws = kernel_sequence(patch, o, t_max)?;
    let mut rows = Vec::new();
    for (t, law) in laws.iter().enumerate().skip(1) {
        for v in patch.ball(t) {
            let d = patch.dist(v) as f64;
            rows.push(KernelRow { v, t, value: law.at(v), bound: 2.0 * (-d * d / (2.0 * t as f64)).exp() });
        }
    }
    let violations = rows.iter().filter(|r| r.value > r.bound + SLACK).count();

    let mut escape = Vec::new();
    for n in 1..=patch.radius() {
        let gr = patch.growth(n)? as f64;
        for (t, value) in escape_profile(patch, n, t_max).into_iter().enumerate().skip(1) {
            let tf = t as f64;
            let bound = 2.0 * (tf + 1.0) * gr * (-((n * n) as f64) / (2.0 * tf)).exp();
            escape.push(EscapeRow { t, n, value, bound });
        }
    }
    let escape_violations = escape.iter().filter(|r| r.value > r.bound + SLACK).count();
    Ok(VcReport { t_max, rows, violations, escape, escape_violations })
}

/// P(the walk from the root reaches S_n by time t) for t = 0..=t_max, by
/// absorbing mass on S_n.
fn escape_profile(patch: &GraphPatch, n: usize, t_max: usize) -> Vec<f64> {
    let mut law = WalkDistribution::point(patch, patch.root());
    let mut absorbed = 0.0;
    let mut out = vec![0.0];
    for _ in 0..t_max {
        law = law.step(patch);
        for v in patch.sphere(n) {
            absorbed += law.mass[v];
            law.mass[v] = 0.0;
        }
        out.push(absorbed);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolRow {
    pub t: usize,
    /// deg^{-1} sum over neighbours x of ||P_o(X_t) - P_x(X_{t-1})||_TV^2.
    pub lhs: f64,
    /// H_t - H_{t-1}.
    pub rhs: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolReport {
    pub rows: Vec<CoolRow>,
    pub violations: usize,
    /// Smallest C with H_t <= C (log Gr(floor(sqrt t)))^2 over the checked t.
    pub entropy_constant: f64,
}

pub fn cool_inequality_check(patch: &GraphPatch, t_max: usize) -> Result<CoolReport> {
    patch.check_radius(t_max + 1)?;
    let o = patch.root();
    let from_o = kernel_sequence(patch, o, t_max)?;
    let nbs: Vec<usize> = patch.graph().neighbors(o).iter().map(|&(w, _)| w as usize).collect();
    let from_x: Vec<Vec<WalkDistribution>> =
        nbs.iter().map(|&x| kernel_sequence(patch, x, t_max.saturating_sub(1))).collect::<Result<_>>()?;
    let deg = patch.degree() as f64;
    let mut rows = Vec::new();
    let mut h_prev = entropy(&from_o[0])?;
    let mut entropy_constant: f64 = 0.0;
    for t in 1..=t_max {
        let h = entropy(&from_o[t])?;
        let lhs = from_x.iter().map(|lx| tv_distance(&from_o[t], &lx[t - 1]).powi(2)).sum::<f64>() / deg;
        rows.push(CoolRow { t, lhs, rhs: h - h_prev, entropy: h });
        let root_t = (t as f64).sqrt().floor() as usize;
        let lg = (patch.growth(root_t)? as f64).ln();
        entropy_constant = entropy_constant.max(h / (lg * lg));
        h_prev = h;
    }
    let violations = rows.iter().filter(|r| r.lhs > r.rhs + SLACK).count();
    Ok(CoolReport { rows, violations, entropy_constant })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KernelDecay {
    /// The inner radius c sqrt(t) (log Gr(sqrt t))^{-1/2} is below 1 for every
    /// c in (0,1], so the bound reads p_t <= 1.
    Vacuous { t: usize, inner: f64, max_kernel: f64 },
    Bound {
        t: usize,
        inner: f64,
        max_kernel: f64,
        /// Largest c in (0,1] for which the bound holds.
        c: f64,
        /// The same supremum without the cap at 1.
        c_sup: f64,
    },
}

/// For each t, the largest c such that max_v p_t(o, v) <= 1 / Gr(c sqrt(t) (log Gr(sqrt t))^{-1/2}),
/// with Gr(x) = |B_floor(x)|.
pub fn kernel_decay_constant(patch: &GraphPatch, t_set: &[usize]) -> Result<Vec<KernelDecay>> {
    let t_max = t_set.iter().copied().max().unwrap_or(0);
    if let Some(&t) = t_set.iter().find(|&&t| t < 4) {
        return Err(Error::Argument(format!("kernel decay needs t >= 4, got {t}")));
    }
    let laws = kernel_sequence(patch, patch.root(), t_max)?;
    let mut out = Vec::with_capacity(t_set.len());
    for &t in t_set {
        let max_kernel = laws[t].max_mass();
        let root_t = (t as f64).sqrt();
        let lg = (patch.growth_extended(root_t.floor() as usize)? as f64).ln();
        let inner = root_t / lg.sqrt();
        if inner < 1.0 {
            out.push(KernelDecay::Vacuous { t, inner, max_kernel });
            continue;
        }
        // Largest rho with |B_rho| <= 1 / max_kernel.
        let limit = 1.0 / max_kernel;
        let mut rho = 0;
        while (patch.growth_extended(rho + 1)? as f64) <= limit {
            rho += 1;
        }
        let c_sup = (rho + 1) as f64 / inner;
        out.push(KernelDecay::Bound { t, inner, max_kernel, c: c_sup.min(1.0), c_sup });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreasesCheck {
    pub t: usize,
    pub m: usize,
    pub r: usize,
    /// Estimate of P(cr_r(X^t) > t/m).
    pub estimate: McEstimate,
    /// 2 t m Gr(r) exp(-r^2 / 2m).
    pub bound: f64,
    /// Lower confidence bound at most the bound.
    pub holds: bool,
}

pub fn creases_check(patch: &GraphPatch, t: usize, m: usize, r: usize, replicas: u64, seed: u64) -> Result<CreasesCheck> {
    check_replicas(replicas)?;
    if t == 0 || m == 0 || r == 0 {
        return Err(Error::Argument("need t, m, r >= 1".into()));
    }
    patch.check_radius(t)?;
    let g = patch.graph();
    let limit = t as f64 / m as f64;
    let k = count_events(replicas, |rep| {
        let path = lazy_walk_replica(patch, patch.root(), t, seed, rep).expect("walk of t steps stays in B_t");
        (crease_times(g, &path, r).len() - 1) as f64 > limit
    });
    let estimate = McEstimate::from_counts(k, replicas, seed, patch.radius());
    let (tf, mf, rf) = (t as f64, m as f64, r as f64);
    let bound = 2.0 * tf * mf * patch.growth_extended(r)? as f64 * (-rf * rf / (2.0 * mf)).exp();
    let holds = estimate.lower() <= bound;
    Ok(CreasesCheck { t, m, r, estimate, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn vc_small() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        let rep = vc_check(&patch, 8).unwrap();
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.escape_violations, 0);
        let far = rep.rows.iter().find(|r| r.t == 1 && patch.dist(r.v) == 1).unwrap();
        assert_eq!(far.value, 0.125);
    }

    #[test]
    fn cool_first_step() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 6).unwrap();
        let rep = cool_inequality_check(&patch, 5).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.rows[0].lhs <= rep.rows[0].rhs);
    }

    #[test]
    fn kernel_decay_reports() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 16).unwrap();
        let out = kernel_decay_constant(&patch, &[4, 16]).unwrap();
        assert!(matches!(out[1], KernelDecay::Bound { .. }));
        assert!(kernel_decay_constant(&patch, &[3]).is_err());
    }
}
