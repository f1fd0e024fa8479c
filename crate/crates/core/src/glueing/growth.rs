use serde::Serialize;

use super::GlueingError;

/// Least-squares fit of `ln(count) = c · v ln v + b` with `v = alpha · m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub c: f64,
    pub intercept: f64,
    pub alpha: f64,
    /// `(m, ln(count) - fitted)` per row.
    pub residuals: Vec<(usize, f64)>,
    /// `c` is not meaningfully positive.
    pub degenerate: bool,
}

impl GrowthFit {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1.abs()).fold(0.0, f64::max)
    }
}

const DEGENERATE_TOL: f64 = 1e-6;

pub fn growth_fit(rows: &[(usize, u128)], alpha: f64) -> Result<GrowthFit, GlueingError> {
    if rows.len() < 3 {
        return Err(GlueingError::TooFewRows(rows.len()));
    }
    if let Some(&(m, _)) = rows.iter().find(|r| r.1 == 0) {
        return Err(GlueingError::ZeroCount(m));
    }
    let xs: Vec<f64> = rows
        .iter()
        .map(|&(m, _)| {
            let v = alpha * m as f64;
            v * v.ln()
        })
        .collect();
    let ys: Vec<f64> = rows.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - c * mx;
    let residuals = rows.iter().zip(xs.iter().zip(&ys)).map(|(r, (x, y))| (r.0, y - (c * x + intercept))).collect();
    Ok(GrowthFit { c, intercept, alpha, residuals, degenerate: c <= DEGENERATE_TOL })
}
