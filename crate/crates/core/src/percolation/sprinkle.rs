use crate::error::{Error, Result};

fn check_open_unit(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0,1), got {p}")))
    }
}

/// 1 - (1-p)^{e^lambda}.
pub fn sprinkle(p: f64, lambda: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("sprinkling amount must be finite, got {lambda}")));
    }
    // (1-p)^{e^λ} = exp(e^λ · ln(1-p)); ln_1p keeps precision for small p.
    Ok(-f64::exp_m1(lambda.exp() * (-p).ln_1p()))
}

/// The sprinkling amount separating p and q: log[log(1-max)/log(1-min)].
pub fn delta(p: f64, q: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    Ok(((-hi).ln_1p() / (-lo).ln_1p()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_values() {
        assert_eq!(sprinkle(0.5, 0.0).unwrap(), 0.5);
        assert!((sprinkle(0.5, 2f64.ln()).unwrap() - 0.75).abs() < 1e-15);
        assert!((delta(0.5, 0.75).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(delta(0.3, 0.3).unwrap(), 0.0);
        assert!(matches!(sprinkle(1.0, 0.1), Err(Error::Domain(_))));
        assert!(matches!(delta(0.0, 0.5), Err(Error::Domain(_))));
    }
}
