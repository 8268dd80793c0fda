use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    ExactEnumeration,
}

/// A scalar estimate with a 95% confidence half-width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub replicas: u64,
    pub seed: u64,
    pub patch_radius: usize,
    pub method: Method,
}

/// Wilson score interval for `k` successes out of `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let phat = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (phat + z2 / (2.0 * n_f)) / denom;
    let spread = z * (phat * (1.0 - phat) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - spread).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + spread).min(1.0) };
    (lo, hi)
}

/// Two-sided normal quantile for a confidence level in (0,1).
pub fn z_for_confidence(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!("confidence must lie in (0,1), got {confidence}")));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

impl McEstimate {
    /// A proportion with a Wilson interval; the half-width is the larger of
    /// the two distances from the mean to the interval ends.
    pub fn from_counts(successes: u64, replicas: u64, seed: u64, patch_radius: usize) -> McEstimate {
        let mean = if replicas == 0 { 0.0 } else { successes as f64 / replicas as f64 };
        let (lo, hi) = wilson_interval(successes, replicas, Z95);
        McEstimate {
            mean,
            ci_halfwidth: (mean - lo).max(hi - mean).max(0.0),
            replicas,
            seed,
            patch_radius,
            method: Method::MonteCarlo,
        }
    }

    /// Sample mean with a normal-approximation interval.
    pub fn from_samples(values: &[f64], seed: u64, patch_radius: usize) -> McEstimate {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n.max(1.0);
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        McEstimate {
            mean,
            ci_halfwidth: Z95 * (var / n.max(1.0)).sqrt(),
            replicas: values.len() as u64,
            seed,
            patch_radius,
            method: Method::MonteCarlo,
        }
    }

    pub fn exact(value: f64, patch_radius: usize) -> McEstimate {
        McEstimate { mean: value, ci_halfwidth: 0.0, replicas: 0, seed: 0, patch_radius, method: Method::ExactEnumeration }
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.ci_halfwidth
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.ci_halfwidth
    }

    /// Whether `value` lies within `k` half-widths of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.ci_halfwidth + 1e-12
    }
}

pub(crate) fn check_replicas(replicas: u64) -> Result<()> {
    if replicas == 0 {
        Err(Error::Argument("at least one replica is required".into()))
    } else {
        Ok(())
    }
}

/// Number of replicas in `0..replicas` for which `event` holds.
pub(crate) fn count_events<F>(replicas: u64, event: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..replicas).into_par_iter().filter(|&r| event(r)).count() as u64
}

/// Per-slot success counts summed over replicas; order-insensitive.
pub(crate) fn count_vector<F>(replicas: u64, slots: usize, event: F) -> Vec<u64>
where
    F: Fn(u64, &mut [u64]) + Sync + Send,
{
    (0..replicas)
        .into_par_iter()
        .fold(
            || vec![0u64; slots],
            |mut acc, r| {
                event(r, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Per-replica values in replica order.
pub(crate) fn collect_replicas<T, F>(range: std::ops::Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

/// Least-squares slope of y against x.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_proportion() {
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!(lo < 0.5 && hi > 0.5 && (hi - lo - 0.192).abs() < 0.01);
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
    }

    #[test]
    fn confidence_quantile() {
        assert!((z_for_confidence(0.95).unwrap() - Z95).abs() < 1e-6);
        assert!(z_for_confidence(1.0).is_err());
    }

    #[test]
    fn exact_has_zero_width() {
        let e = McEstimate::exact(0.25, 2);
        assert_eq!(e.ci_halfwidth, 0.0);
        assert_eq!(e.method, Method::ExactEnumeration);
    }

    #[test]
    fn slope_of_line() {
        assert!((fit_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-12);
    }
}
