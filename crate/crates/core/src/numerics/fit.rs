use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Least-squares line through `(log ε, log value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `log value = slope·log ε + intercept`.
///
/// A perfect fit (including a constant series) reports `r² = 1`.
pub fn fit_loglog_rate(pairs: &[(f64, f64)]) -> Result<LogLogFit> {
    if pairs.len() < 3 {
        return domain(format!("need at least 3 points to fit a rate, got {}", pairs.len()));
    }
    if let Some(&(e, v)) = pairs.iter().find(|(e, v)| !(*e > 0.0) || !(*v > 0.0) || !e.is_finite() || !v.is_finite()) {
        return domain(format!("rate fit needs positive finite inputs, got ({e}, {v})"));
    }
    let mut eps: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    eps.sort_by(f64::total_cmp);
    if eps.windows(2).any(|w| w[0] == w[1]) {
        return domain("rate fit needs distinct ε values");
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy <= 1e-28 * n { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(LogLogFit {
        slope,
        intercept,
        r_squared,
    })
}
