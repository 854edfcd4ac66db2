use crate::duality::ParamCurve;
use crate::error::{Error, Result};
use crate::par;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelReport {
    pub is_power_law: bool,
    /// Force exponent `A/B - 3` when the ratio is constant.
    pub alpha: Option<f64>,
    pub ratio_samples: Vec<(f64, f64)>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub skipped: usize,
}

/// `(A, B)` at parameter `s` for an arbitrary parametrization.
///
/// `A/B` is constant exactly when the curve is a trajectory of a parallel
/// power-law force, and then equals `alpha + 3`.
pub fn trajectory_expressions(curve: &ParamCurve, s: f64) -> Result<(f64, f64)> {
    let (x, y) = curve.jets(s)?;
    Ok(expressions_from_jets([x.value, x.d1, x.d2, x.d3], [y.value, y.d1, y.d2, y.d3]))
}

/// `(A, B)` from the jets `[x, x', x'', x''']` and `[y, y', y'', y''']`.
pub fn expressions_from_jets(x: [f64; 4], y: [f64; 4]) -> (f64, f64) {
    let [_, x1, x2, x3] = x;
    let [y0, y1, y2, y3] = y;
    let a = x1 * x1 * (3.0 * y1 * y2 + y0 * y3)
        - x1 * (3.0 * x2 * y1 * y1 + y0 * x3 * y1 + 3.0 * y0 * x2 * y2)
        + 3.0 * y0 * y1 * x2 * x2;
    let b = x1 * y1 * (x1 * y2 - x2 * y1);
    (a, b)
}

/// Test whether `A/B` is constant over `grid` to within `tol`.
pub fn trajectory_criterion(curve: &ParamCurve, grid: &[f64], tol: f64) -> Result<ParallelReport> {
    let jets = par::try_map_grid(grid, |&s| {
        let (x, y) = curve.jets(s)?;
        Ok((s, [x.value, x.d1, x.d2, x.d3], [y.value, y.d1, y.d2, y.d3]))
    })?;
    trajectory_criterion_samples(&jets, tol)
}

/// Criterion on precomputed `(s, x jet, y jet)` samples.
pub fn trajectory_criterion_samples(points: &[(f64, [f64; 4], [f64; 4])], tol: f64) -> Result<ParallelReport> {
    let mut ratio_samples = Vec::new();
    let mut skipped = 0;
    for &(s, x, y) in points {
        let (a, b) = expressions_from_jets(x, y);
        let scale = (x[1] * x[1] + y[1] * y[1]).powf(1.5) * (1.0 + y[0].abs() + y[2].abs());
        if b.abs() <= 1e-9 * scale {
            skipped += 1;
        } else {
            ratio_samples.push((s, a / b));
        }
    }
    if ratio_samples.is_empty() {
        return Err(Error::Degenerate(
            "B vanishes on the whole grid: straight line or horizontal motion".into(),
        ));
    }
    let mean = ratio_samples.iter().map(|r| r.1).sum::<f64>() / ratio_samples.len() as f64;
    let max_deviation = ratio_samples.iter().map(|r| (r.1 - mean).abs()).fold(0.0, f64::max);
    let is_power_law = max_deviation <= tol * (1.0 + mean.abs());
    Ok(ParallelReport {
        is_power_law,
        alpha: is_power_law.then_some(mean - 3.0),
        ratio_samples,
        max_deviation,
        tolerance: tol,
        skipped,
    })
}
