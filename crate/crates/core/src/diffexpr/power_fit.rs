use crate::error::{Error, Result};
use serde::Serialize;

/// Outcome of fitting `expr = c f^alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerFit {
    pub coefficient: f64,
    /// `None` when every expression value is zero (any exponent fits).
    pub exponent: Option<f64>,
    pub max_residual: f64,
    pub accepted: bool,
    pub tolerance: f64,
    pub reason: Option<String>,
}

/// Values at or below this (scaled by `1 + f^2`) count as exact zeros.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Least-squares fit of `ln|expr| = ln|c| + alpha ln f`, verified pointwise
/// by relative residual in linear space.
pub fn power_fit(samples: &[(f64, f64)], tol: f64) -> Result<PowerFit> {
    if samples.len() < 3 {
        return Err(Error::Input(format!(
            "power fit needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    if let Some((f, _)) = samples.iter().find(|(f, e)| !(*f > 0.0) || !f.is_finite() || !e.is_finite()) {
        return Err(Error::Input(format!("power fit needs finite f > 0, got {f}")));
    }
    let is_zero = |f: f64, e: f64| e.abs() <= ZERO_THRESHOLD * (1.0 + f * f);
    let zeros = samples.iter().filter(|(f, e)| is_zero(*f, *e)).count();
    if zeros == samples.len() {
        let max_residual = samples.iter().map(|(_, e)| e.abs()).fold(0.0, f64::max);
        return Ok(PowerFit {
            coefficient: 0.0,
            exponent: None,
            max_residual,
            accepted: true,
            tolerance: tol,
            reason: None,
        });
    }
    let reject = |reason: &str| PowerFit {
        coefficient: f64::NAN,
        exponent: None,
        max_residual: f64::INFINITY,
        accepted: false,
        tolerance: tol,
        reason: Some(reason.to_string()),
    };
    if zeros > 0 {
        return Ok(reject("expression vanishes at some samples but not all"));
    }
    let sign = samples[0].1.signum();
    if samples.iter().any(|(_, e)| e.signum() != sign) {
        return Ok(reject("expression changes sign"));
    }

    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|(f, _)| f.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, e)| e.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let spread = xs.iter().map(|x| (x - mx).abs()).fold(0.0, f64::max);
    let (alpha, note) = if spread <= 1e-12 * (1.0 + mx.abs()) {
        (0.0, Some("f is constant on the samples: exponent undetermined, reported as 0".to_string()))
    } else {
        (sxy / sxx, None)
    };
    let coefficient = sign * (my - alpha * mx).exp();
    let max_residual = samples
        .iter()
        .map(|(f, e)| (coefficient * f.powf(alpha) - e).abs() / e.abs())
        .fold(0.0, f64::max);
    let accepted = max_residual <= tol;
    Ok(PowerFit {
        coefficient,
        exponent: Some(alpha),
        max_residual,
        accepted,
        tolerance: tol,
        reason: if accepted { note } else { Some("residual exceeds tolerance".into()) },
    })
}
