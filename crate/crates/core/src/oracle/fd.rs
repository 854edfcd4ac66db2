use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdEstimate {
    pub value: f64,
    pub error: f64,
}

/// Central stencils `(offset, weight)` in units of `h`, scaled by `h^-order`.
fn stencil(order: usize) -> &'static [(i32, f64)] {
    match order {
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
    }
}

fn richardson(levels: &[f64]) -> FdEstimate {
    // levels[k] uses step h / 2^k; each stencil has an even error expansion.
    let mut table = vec![levels.to_vec()];
    for m in 1..levels.len() {
        let prev = &table[m - 1];
        let p = 4f64.powi(m as i32);
        let row: Vec<f64> = (0..prev.len() - 1).map(|k| (p * prev[k + 1] - prev[k]) / (p - 1.0)).collect();
        table.push(row);
    }
    let best = *table.last().unwrap().last().unwrap();
    let error = if levels.len() < 2 {
        f64::INFINITY
    } else {
        let prev = table[table.len() - 2].last().copied().unwrap();
        (best - prev).abs()
    };
    FdEstimate { value: best, error }
}

fn check_order(order: usize) -> Result<()> {
    if order > 4 {
        return Err(Error::Parameter(format!("derivative order {order} exceeds 4")));
    }
    Ok(())
}

/// Derivative of `f` at `t` by central differences with steps `h, h/2, h/4, h/8`
/// and Richardson extrapolation; the stencil reaches `t +/- 2h` at most.
pub fn fd_derivative(f: impl Fn(f64) -> Result<f64>, t: f64, order: usize, h: f64) -> Result<FdEstimate> {
    check_order(order)?;
    if !(h > 0.0) {
        return Err(Error::Parameter("step must be positive".into()));
    }
    if order == 0 {
        return Ok(FdEstimate { value: f(t)?, error: 0.0 });
    }
    let st = stencil(order);
    let mut levels = Vec::with_capacity(4);
    for k in 0..4 {
        let hk = h / 2f64.powi(k);
        let mut acc = 0.0;
        for &(o, w) in st {
            acc += w * f(t + o as f64 * hk)?;
        }
        levels.push(acc / hk.powi(order as i32));
    }
    Ok(richardson(&levels))
}

/// Derivative from uniformly spaced samples `(t, value)` at the sample
/// nearest `t`, using steps of 1, 2, 4 and 8 sample spacings as far as
/// the data reaches.
pub fn fd_derivative_samples(samples: &[(f64, f64)], t: f64, order: usize) -> Result<FdEstimate> {
    check_order(order)?;
    if samples.len() < 3 {
        return Err(Error::InsufficientData("need at least 3 samples".into()));
    }
    let dt = (samples[samples.len() - 1].0 - samples[0].0) / (samples.len() - 1) as f64;
    if !(dt > 0.0) || samples.windows(2).any(|w| ((w[1].0 - w[0].0) - dt).abs() > 1e-9 * dt) {
        return Err(Error::Input("samples must be increasing and uniformly spaced".into()));
    }
    let pos = (t - samples[0].0) / dt;
    let i = pos.round();
    if (pos - i).abs() > 1e-6 || i < 0.0 || i as usize >= samples.len() {
        return Err(Error::domain(t, "sample grid nodes"));
    }
    let i = i as i64;
    if order == 0 {
        return Ok(FdEstimate { value: samples[i as usize].1, error: 0.0 });
    }
    let st = stencil(order);
    let reach = st.iter().map(|s| s.0.abs()).max().unwrap() as i64;
    let mut spacings = Vec::new();
    let mut m = 1i64;
    while spacings.len() < 4 && i - reach * m >= 0 && i + reach * m < samples.len() as i64 {
        spacings.push(m);
        m *= 2;
    }
    if spacings.is_empty() {
        return Err(Error::Domain { t, domain: "stencil extends past the sample range".into() });
    }
    // Largest step first, matching the halving order used by `richardson`.
    let levels: Vec<f64> = spacings
        .iter()
        .rev()
        .map(|&m| {
            let hk = m as f64 * dt;
            st.iter().map(|&(o, w)| w * samples[(i + o as i64 * m) as usize].1).sum::<f64>() / hk.powi(order as i32)
        })
        .collect();
    Ok(richardson(&levels))
}
