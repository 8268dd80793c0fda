use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::percolation::sprinkle;

/// Scales, sprinkling amounts and parameters of the induction. Scales past
/// the first are kept as log log log n_i, since n_1 already has thousands of
/// digits in its exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub n0: f64,
    pub logloglog_n: Vec<f64>,
    pub delta: Vec<f64>,
    pub p: Vec<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    pub burnin_value: f64,
}

impl Schedule {
    /// (log log n0)^{-1/2}.
    pub fn base_delta(&self) -> f64 {
        self.n0.ln().ln().powf(-0.5)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serialises")
    }
}

/// Builds entries 0..=i_max. Each n_i is exp(log(n_{i-1})^9), so the triple
/// log grows by log 9 per step.
pub fn make_schedule(n0: f64, p0: f64, k: f64, burnin_value: f64, i_max: usize) -> Result<Schedule> {
    if !(n0 >= 16.0) || !n0.is_finite() {
        return Err(Error::Domain(format!("the first scale must be at least 16, got {n0}")));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::Domain(format!("p0 must lie in (0,1), got {p0}")));
    }
    if !(k.is_finite() && burnin_value.is_finite() && k >= 0.0 && burnin_value >= 0.0) {
        return Err(Error::Domain(format!("K and the burn-in value must be finite and nonnegative, got {k}, {burnin_value}")));
    }
    let lll0 = n0.ln().ln().ln();
    let base = n0.ln().ln().powf(-0.5);
    let nine = 9f64.ln();
    let logloglog_n: Vec<f64> = (0..=i_max).map(|i| lll0 + i as f64 * nine).collect();
    let delta: Vec<f64> =
        (0..=i_max).map(|i| if i == 0 { base + k * burnin_value } else { base * 3f64.powi(-(i as i32)) }).collect();
    let mut p = vec![p0];
    for i in 0..i_max {
        p.push(sprinkle(p[i], delta[i])?);
    }
    Ok(Schedule { n0, logloglog_n, delta, p, k, burnin_value })
}

/// The limit of p_i: the amounts after the first sum to half the base amount.
pub fn p_infinity(schedule: &Schedule) -> Result<f64> {
    let total = schedule.base_delta() * 1.5 + schedule.k * schedule.burnin_value;
    sprinkle(schedule.p[0], total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_scale_triple_log() {
        let s = make_schedule(16.0, 0.5, 1.0, 0.0, 3).unwrap();
        assert!((s.logloglog_n[1] - (16f64.ln().ln().ln() + 9f64.ln())).abs() < 1e-12);
        assert!((s.delta[1] / s.delta[2] - 3.0).abs() < 1e-12);
        assert!(make_schedule(15.0, 0.5, 1.0, 0.0, 3).is_err());
    }

    #[test]
    fn limit_matches_terms() {
        let n0 = std::f64::consts::E.exp().exp();
        let s = make_schedule(n0, 0.4, 2.0, 0.01, 60).unwrap();
        let pinf = p_infinity(&s).unwrap();
        assert!((pinf - s.p[60]).abs() < 1e-12);
        let s0 = make_schedule(n0, 0.4, 0.0, 0.0, 1).unwrap();
        let want = sprinkle(0.4, 1.5 * (-0.5f64).exp()).unwrap();
        assert!((p_infinity(&s0).unwrap() - want).abs() < 1e-12);
    }
}
