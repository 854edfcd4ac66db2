use crate::duality::ParamCurve;
use crate::error::{Error, Result};
use crate::par;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalReport {
    pub r: f64,
    pub mean: f64,
    /// Max relative deviation from the mean.
    pub max_deviation: f64,
    pub values: Vec<(f64, f64)>,
}

/// `y^r (1 + y'^2)^(-1/2)` along a canonical curve, where `dy/dx = f'/f`;
/// constant exactly on extremals of `integral of y^r ds`.
pub fn variational_residual(curve: &ParamCurve, r: f64, grid: &[f64]) -> Result<VariationalReport> {
    let f = curve.profile()?;
    let values = par::try_map_grid(grid, |&t| {
        let j = f.jet(t)?;
        Ok((t, j.value.powf(r + 1.0) / j.value.hypot(j.d1)))
    })?;
    if values.is_empty() {
        return Err(Error::InsufficientData("empty grid".into()));
    }
    let mean = values.iter().map(|v| v.1).sum::<f64>() / values.len() as f64;
    let max_deviation = values.iter().map(|v| (v.1 - mean).abs()).fold(0.0, f64::max) / mean.abs().max(1e-300);
    Ok(VariationalReport { r, mean, max_deviation, values })
}
