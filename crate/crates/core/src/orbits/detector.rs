use super::PolarCurve;
use crate::error::{Error, Result};
use crate::par;
use serde::Serialize;

/// Detector tolerance on quotient spread for closed-form input.
pub const TOL_CLOSED_FORM: f64 = 1e-6;
/// Detector tolerance for finite-difference input.
pub const TOL_SAMPLED: f64 = 1e-3;
/// Points with `|f'|` or `|f + f''|` below this times `1 + |f|` are skipped.
const SKIP_SCALE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degenerate {
    /// `f` constant: a circle about the centre of force, an orbit of any law.
    CentredCircle,
    /// `f + f'' = 0`: straight line, zero force.
    FreeMotion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawReport {
    pub is_power_law: bool,
    /// Exponent in `f + f'' = c f^alpha`.
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    /// Force exponent `-2 - alpha`.
    pub beta: Option<f64>,
    pub degenerate: Option<Degenerate>,
    pub quotient_samples: Vec<f64>,
    pub max_quotient_deviation: f64,
    pub tolerance: f64,
    /// Grid parameters skipped because `f'` or `f + f''` vanished there.
    pub skipped: Vec<f64>,
}

/// Test whether the orbit obeys a central power law by checking that
/// `f (f''' + f') / (f' (f + f''))` is constant on the grid.
pub fn detect_power_law(curve: &PolarCurve, grid: &[f64], tol: f64) -> Result<PowerLawReport> {
    let jets = par::try_map_grid(grid, |&t| {
        curve.f.jet(t).map(|j| [j.value, j.d1, j.d2, j.d3])
    })?;
    let pts: Vec<(f64, [f64; 4])> = grid.iter().copied().zip(jets).collect();
    detect_power_law_samples(&pts, tol)
}

/// Detector on precomputed `(theta, [f, f', f'', f'''])` samples.
pub fn detect_power_law_samples(points: &[(f64, [f64; 4])], tol: f64) -> Result<PowerLawReport> {
    if points.is_empty() {
        return Err(Error::InsufficientData("empty grid".into()));
    }
    let small = |x: f64, f: f64| x.abs() < SKIP_SCALE * (1.0 + f.abs());
    let base = PowerLawReport {
        is_power_law: false,
        alpha: None,
        c: None,
        beta: None,
        degenerate: None,
        quotient_samples: vec![],
        max_quotient_deviation: 0.0,
        tolerance: tol,
        skipped: vec![],
    };
    if points.iter().all(|(_, [f, _, f2, _])| small(f + f2, *f)) {
        return Ok(PowerLawReport {
            is_power_law: true,
            c: Some(0.0),
            degenerate: Some(Degenerate::FreeMotion),
            ..base
        });
    }
    if points.iter().all(|(_, [f, f1, _, _])| small(*f1, *f)) {
        let (_, [f, _, f2, _]) = points[points.len() / 2];
        return Ok(PowerLawReport {
            is_power_law: true,
            c: Some(f + f2),
            degenerate: Some(Degenerate::CentredCircle),
            ..base
        });
    }
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    for &(t, [f, f1, f2, f3]) in points {
        let b = f + f2;
        if small(f1, f) || small(b, f) {
            skipped.push(t);
        } else {
            used.push((t, f, b, f * (f3 + f1) / (f1 * b)));
        }
    }
    if used.is_empty() {
        return Err(Error::InsufficientData(format!(
            "all {} grid points skipped (f' or f + f'' vanishes)",
            points.len()
        )));
    }
    let q: Vec<f64> = used.iter().map(|u| u.3).collect();
    let mean = q.iter().sum::<f64>() / q.len() as f64;
    let dev = q.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    let accepted = dev <= tol && mean.is_finite();
    let (c, beta, alpha) = if accepted {
        let (_, f, b, _) = used[used.len() / 2];
        (Some(b / f.powf(mean)), Some(-2.0 - mean), Some(mean))
    } else {
        (None, None, None)
    };
    Ok(PowerLawReport {
        is_power_law: accepted,
        alpha,
        c,
        beta,
        degenerate: None,
        quotient_samples: q,
        max_quotient_deviation: dev,
        tolerance: tol,
        skipped,
    })
}
