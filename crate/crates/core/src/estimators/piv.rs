use crate::error::{Error, Result};
use crate::estimators::stats::{check_replicas, count_events, count_vector, McEstimate};
use crate::estimators::two_point::est_pair_grid;
use crate::graph::{low_growth_scales, GraphPatch};
use crate::percolation::events::{ball_forest, piv_in_forest};
use crate::percolation::{EdgeLabels, VertexMask};

#[derive(Debug, Clone)]
pub struct PivEstimate {
    pub estimate: McEstimate,
    /// C [log Gr(n) / n]^{1/2 - eps}, when (C, eps) was supplied.
    pub ceiling: Option<f64>,
}

/// Labels covering every edge of B_n.
pub(crate) fn ball_labels(patch: &GraphPatch, n: usize, seed: u64, replica: u64) -> EdgeLabels {
    EdgeLabels::sample_prefix(seed, replica, patch.ball_edge_bound(n))
}

/// Estimate of P_p(Piv[m, n]).
pub fn est_piv(
    patch: &GraphPatch,
    p: f64,
    m: usize,
    n: usize,
    replicas: u64,
    seed: u64,
    ceiling: Option<(f64, f64)>,
) -> Result<PivEstimate> {
    check_replicas(replicas)?;
    if m == 0 || m > n {
        return Err(Error::Argument(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    patch.check_radius(n)?;
    let k = count_events(replicas, |r| {
        let labels = ball_labels(patch, n, seed, r);
        let mut d = ball_forest(patch, &labels, p, n);
        piv_in_forest(patch, &mut d, m, n)
    });
    let ceiling = match ceiling {
        Some((c, eps)) => {
            let g = patch.growth(n)? as f64;
            Some(c * (g.ln() / n as f64).powf(0.5 - eps))
        }
        None => None,
    };
    Ok(PivEstimate { estimate: McEstimate::from_counts(k, replicas, seed, patch.radius()), ceiling })
}

/// Largest k with k^3 <= n.
pub fn floor_cbrt(n: usize) -> usize {
    let mut k = (n as f64).cbrt().round() as usize;
    while k.pow(3) > n {
        k -= 1;
    }
    while (k + 1).pow(3) <= n {
        k += 1;
    }
    k
}

#[derive(Debug, Clone)]
pub struct BurninB {
    pub m: usize,
    pub b: usize,
    /// Outer radius floor(m^{1/3}) of the two-arm events.
    pub outer: usize,
    pub threshold: f64,
    /// (b, estimate of P_p(Piv[4b, outer])) for every candidate b.
    pub candidates: Vec<(usize, McEstimate)>,
}

/// The largest b in [1, m^{1/3}/8] whose two-arm probability Piv[4b, m^{1/3}]
/// has upper confidence bound at most 1/log m; zero if there is none.
pub fn burnin_b(patch: &GraphPatch, m: usize, p: f64, replicas: u64, seed: u64) -> Result<BurninB> {
    check_replicas(replicas)?;
    if m < 2 {
        return Err(Error::Argument(format!("burn-in scale must be at least 2, got {m}")));
    }
    let outer = floor_cbrt(m);
    let threshold = 1.0 / (m as f64).ln();
    let b_max = outer / 8;
    if b_max == 0 {
        return Ok(BurninB { m, b: 0, outer, threshold, candidates: Vec::new() });
    }
    patch.check_radius(outer)?;
    let counts = count_vector(replicas, b_max, |r, acc| {
        let labels = ball_labels(patch, outer, seed, r);
        let mut d = ball_forest(patch, &labels, p, outer);
        for (i, slot) in acc.iter_mut().enumerate() {
            if piv_in_forest(patch, &mut d, 4 * (i + 1), outer) {
                *slot += 1;
            }
        }
    });
    let candidates: Vec<(usize, McEstimate)> = counts
        .iter()
        .enumerate()
        .map(|(i, &k)| (i + 1, McEstimate::from_counts(k, replicas, seed, patch.radius())))
        .collect();
    let b = candidates.iter().filter(|(_, e)| e.upper() <= threshold).map(|&(b, _)| b).max().unwrap_or(0);
    Ok(BurninB { m, b, outer, threshold, candidates })
}

#[derive(Debug, Clone)]
pub struct BurninTotal {
    pub value: f64,
    /// Low growth scales in [(log n)^{1/2}, n] that enter the maximum.
    pub scales: Vec<usize>,
    /// (m, b(m)) for the scales whose b was estimated.
    pub b_values: Vec<(usize, usize)>,
}

/// Evaluates the burn-in from already computed b(m) values.
pub fn burnin_from_b(patch: &GraphPatch, b_values: &[(usize, usize)]) -> Result<f64> {
    let mut value: f64 = 0.0;
    for &(m, b) in b_values {
        if b <= 1 {
            return Ok(f64::INFINITY);
        }
        let lm = (m as f64).ln();
        let lg = (patch.growth_extended(b)? as f64).ln();
        value = value.max((lm.ln() / lm.min(lg)).powf(0.25));
    }
    Ok(value)
}

pub fn burnin_total(
    patch: &GraphPatch,
    n: usize,
    p: f64,
    big_d: f64,
    replicas: u64,
    seed: u64,
) -> Result<BurninTotal> {
    if n < 16 {
        return Err(Error::Domain(format!("burn-in needs n >= 16, got {n}")));
    }
    let lo = (n as f64).ln().sqrt();
    let scales: Vec<usize> = low_growth_scales(patch, big_d, n)?.into_iter().filter(|&m| m as f64 >= lo).collect();
    if scales.is_empty() {
        return Ok(BurninTotal { value: 0.0, scales, b_values: Vec::new() });
    }
    // b(m) <= floor(m^{1/3}/8); when that cap is at most 1 the value is infinite
    // whatever the estimates say.
    if let Some(&m) = scales.iter().find(|&&m| floor_cbrt(m) / 8 <= 1) {
        let b = floor_cbrt(m) / 8;
        return Ok(BurninTotal { value: f64::INFINITY, scales, b_values: vec![(m, b)] });
    }
    let mut b_values = Vec::with_capacity(scales.len());
    for &m in &scales {
        let b = burnin_b(patch, m, p, replicas, seed)?.b;
        b_values.push((m, b));
        if b <= 1 {
            break;
        }
    }
    let value = burnin_from_b(patch, &b_values)?;
    Ok(BurninTotal { value, scales, b_values })
}

#[derive(Debug, Clone)]
pub struct CerfCheck {
    pub lhs: McEstimate,
    pub rhs: f64,
    /// The right side evaluated at the conservative ends of its estimates.
    pub rhs_upper: f64,
    pub piv_half: McEstimate,
    pub min_two_point: McEstimate,
    /// lhs lower bound <= rhs upper bound.
    pub holds: bool,
}

/// Compares P_p(Piv[r,n]) with P_p(Piv[1,n/2]) |S_r|^2 Gr(m) / min_{a,b in S_r} P_p(a <-> b inside B_m).
pub fn cerf_check(
    patch: &GraphPatch,
    p: f64,
    r: usize,
    m: usize,
    n: usize,
    replicas: u64,
    seed: u64,
) -> Result<CerfCheck> {
    if !(1 < r && r <= m && 2 * m <= n) {
        return Err(Error::Argument(format!("need 1 < r <= m <= n/2, got r = {r}, m = {m}, n = {n}")));
    }
    patch.check_radius(n)?;
    let lhs = est_piv(patch, p, r, n, replicas, seed, None)?.estimate;
    let piv_half = est_piv(patch, p, 1, n / 2, replicas, seed, None)?.estimate;
    let sphere: Vec<usize> = patch.sphere(r).collect();
    let pairs: Vec<(usize, usize)> =
        sphere.iter().enumerate().flat_map(|(i, &a)| sphere[i + 1..].iter().map(move |&b| (a, b))).collect();
    let lambda = VertexMask::ball(patch, m);
    let grid = est_pair_grid(patch, p, &pairs, Some(&lambda), replicas, seed)?;
    let min_two_point = grid.min().2.clone();
    let factor = (sphere.len() * sphere.len()) as f64 * patch.growth(m)? as f64;
    let rhs = if min_two_point.mean > 0.0 { piv_half.mean * factor / min_two_point.mean } else { f64::INFINITY };
    let rhs_upper = if min_two_point.lower() > 0.0 {
        piv_half.upper() * factor / min_two_point.lower()
    } else {
        f64::INFINITY
    };
    let holds = lhs.lower() <= rhs_upper;
    Ok(CerfCheck { lhs, rhs, rhs_upper, piv_half, min_two_point, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn piv_extremes() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 6).unwrap();
        for p in [0.0, 1.0] {
            assert_eq!(est_piv(&patch, p, 1, 6, 50, 3, None).unwrap().estimate.mean, 0.0);
        }
        let c = est_piv(&patch, 0.5, 1, 4, 10, 3, Some((1.0, 0.1))).unwrap().ceiling.unwrap();
        assert!((c - (41f64.ln() / 4.0).powf(0.4)).abs() < 1e-12);
    }

    #[test]
    fn cube_roots() {
        assert_eq!(floor_cbrt(4096), 16);
        assert_eq!(floor_cbrt(4095), 15);
        assert_eq!(floor_cbrt(1), 1);
    }

    #[test]
    fn burnin_small_m_is_zero() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 16).unwrap();
        assert_eq!(burnin_b(&patch, 500, 0.6, 10, 1).unwrap().b, 0);
        let full = burnin_b(&patch, 4096, 1.0, 200, 1).unwrap();
        assert_eq!(full.b, 2);
    }

    #[test]
    fn burnin_total_conventions() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        // No low growth scale below 1331 for D = 2.
        assert_eq!(burnin_total(&patch, 1000, 0.6, 2.0, 10, 1).unwrap().value, 0.0);
        assert!(burnin_total(&patch, 4096, 0.6, 2.0, 10, 1).unwrap().value.is_infinite());
        assert!(burnin_total(&patch, 8, 0.6, 2.0, 10, 1).is_err());
    }

    #[test]
    fn cerf_geometry_checked() {
        let patch = GraphPatch::build(GraphFamily::HyperCubic(2), 8).unwrap();
        assert!(cerf_check(&patch, 0.5, 1, 3, 8, 10, 1).is_err());
        assert!(cerf_check(&patch, 0.5, 2, 5, 8, 10, 1).is_err());
        let c = cerf_check(&patch, 1.0, 2, 3, 8, 20, 1).unwrap();
        assert_eq!(c.lhs.mean, 0.0);
        assert!(c.holds);
    }
}
