use crate::error::{Error, Result};

/// Self-avoiding path count bound on a degree-d graph:
/// (d/(d-1)) (1/(1-p(d-1))) (p(d-1))^dist, valid for p < 1/(d-1).
pub fn path_counting_bound(p: f64, d: usize, dist: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {d}")));
    }
    let k = (d - 1) as f64;
    if !(p >= 0.0 && p * k < 1.0) {
        return Err(Error::Domain(format!("need 0 <= p < 1/(d-1) = {}, got {p}", 1.0 / k)));
    }
    Ok(d as f64 / k / (1.0 - p * k) * (p * k).powi(dist as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plug_in_values() {
        assert!((path_counting_bound(0.2, 4, 0).unwrap() - (4.0 / 3.0) / 0.4).abs() < 1e-12);
        assert_eq!(path_counting_bound(0.0, 4, 2).unwrap(), 0.0);
        assert!(matches!(path_counting_bound(0.34, 4, 1), Err(Error::Domain(_))));
    }
}
