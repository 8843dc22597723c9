//! Least-squares fits used for order and rate estimates.

/// Least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points for a slope");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    sxy / sxx
}

/// Slope of `ln(err)` against `ln(step)`: the observed convergence order.
pub fn loglog_slope(step: &[f64], err: &[f64]) -> f64 {
    let lx: Vec<f64> = step.iter().map(|s| s.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|e| e.ln()).collect();
    linear_slope(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law_exponent() {
        let taus = [0.1, 0.05, 0.025, 0.0125];
        let errs: Vec<f64> = taus.iter().map(|t: &f64| 3.0 * t.powi(3)).collect();
        assert!((loglog_slope(&taus, &errs) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn linear_slope_of_line() {
        assert!((linear_slope(&[0.0, 1.0, 2.0], &[1.0, -1.0, -3.0]) + 2.0).abs() < 1e-15);
    }
}
