use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Errors at or below this are treated as numerically zero and left out of
/// the regression.
pub const ZERO_ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Ordinary least squares of `log(error)` against `log(2 - alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub norm_id: String,
    /// `2 - alpha`, strictly decreasing toward zero.
    pub abscissae: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(abscissa, error)` pairs dropped by the zero-error rule.
    pub excluded: Vec<(f64, f64)>,
}

impl RateFit {
    /// Value of the fitted power law `exp(intercept) * x^slope`.
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

pub fn fit_rate(norm_id: &str, abscissae: &[f64], errors: &[f64]) -> Result<RateFit> {
    if abscissae.len() != errors.len() {
        return Err(Error::invalid(
            "errors",
            format!("{} abscissae but {} errors", abscissae.len(), errors.len()),
        ));
    }
    let mut points: Vec<(f64, f64)> = abscissae.iter().copied().zip(errors.iter().copied()).collect();
    if let Some(&(x, _)) = points.iter().find(|(x, _)| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::invalid("abscissae", format!("must be positive, got {x}")));
    }
    if let Some(&(_, e)) = points.iter().find(|(_, e)| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::invalid(
            "errors",
            format!("must be finite and non-negative, got {e}"),
        ));
    }
    points.sort_by(|a, b| b.0.total_cmp(&a.0));
    if points.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::DegenerateSweep("repeated abscissa".into()));
    }
    let (kept, excluded): (Vec<_>, Vec<_>) = points.into_iter().partition(|(_, e)| *e > ZERO_ERROR_FLOOR);
    if kept.len() < 3 {
        return Err(Error::DegenerateSweep(format!(
            "{} usable points, need at least 3",
            kept.len()
        )));
    }

    let logs: Vec<(f64, f64)> = kept.iter().map(|(x, e)| (x.ln(), e.ln())).collect();
    let m = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };

    Ok(RateFit {
        norm_id: norm_id.to_string(),
        abscissae: kept.iter().map(|p| p.0).collect(),
        errors: kept.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        r_squared,
        excluded,
    })
}
