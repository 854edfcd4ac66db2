//! Dormand-Prince 5(4) with PI step control and fourth-order dense output.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct OdeRun {
    pub samples: Vec<(f64, Vec<f64>)>,
    /// Reason the run ended before the last requested time.
    pub stopped: Option<String>,
    pub accepted: usize,
    pub rejected: usize,
}

/// Right-hand side; `Err` marks a state outside the admissible region.
pub trait OdeSystem {
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> std::result::Result<(), String>;
}

impl<F> OdeSystem for F
where
    F: Fn(f64, &[f64], &mut [f64]) -> std::result::Result<(), String>,
{
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> std::result::Result<(), String> {
        self(t, y, dy)
    }
}

fn norm(err: &[f64], y0: &[f64], y1: &[f64], o: &OdeOptions) -> f64 {
    let s: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = o.atol + o.rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (s / err.len() as f64).sqrt()
}

/// Integrate from `(t0, y0)` and report the state at each of `t_out`
/// (increasing, all `>= t0`).
pub fn dopri5(sys: &impl OdeSystem, t0: f64, y0: &[f64], t_out: &[f64], o: &OdeOptions) -> Result<OdeRun> {
    if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.first().is_some_and(|&t| t < t0) {
        return Err(Error::Input("output times must be increasing and not before the start".into()));
    }
    let n = y0.len();
    let mut run = OdeRun { samples: Vec::with_capacity(t_out.len()), stopped: None, accepted: 0, rejected: 0 };
    let t_end = match t_out.last() {
        Some(&t) => t,
        None => return Ok(run),
    };
    let mut k = vec![vec![0.0; n]; 7];
    let mut y = y0.to_vec();
    let mut t = t0;
    if let Err(m) = sys.rhs(t, &y, &mut k[0]) {
        return Err(Error::Input(format!("initial state rejected: {m}")));
    }
    let mut next_out = 0;
    while next_out < t_out.len() && t_out[next_out] <= t0 {
        run.samples.push((t_out[next_out], y.clone()));
        next_out += 1;
    }
    let span = t_end - t0;
    let mut h = {
        let d0 = norm(&y, &y, &y, o);
        let d1 = norm(&k[0], &y, &y, o);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0.min(span).max(1e-12 * span)
    };
    let (mut facold, beta, safe) = (1e-4f64, 0.04, 0.9);
    let expo1 = 0.2 - beta * 0.75;
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut last_reject = false;
    while next_out < t_out.len() {
        if run.accepted + run.rejected >= o.max_steps {
            return Err(Error::Convergence { what: "ode step budget exhausted".into(), achieved: t });
        }
        if h < 1e-14 * (1.0 + t.abs()) {
            run.stopped = Some(format!("step size underflow at t = {t:.12e}"));
            break;
        }
        let last = h >= t_end - t;
        h = h.min(t_end - t);
        let mut bad_stage = None;
        for s in 1..7 {
            for i in 0..n {
                stage[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            if let Err(m) = sys.rhs(t + C[s] * h, &stage, &mut k[s]) {
                bad_stage = Some(m);
                break;
            }
        }
        if let Some(m) = bad_stage {
            run.rejected += 1;
            h *= 0.25;
            if h < 1e-14 * (1.0 + t.abs()) {
                run.stopped = Some(format!("{m} near t = {t:.12e}"));
                break;
            }
            continue;
        }
        // Stage 7 evaluated at the fifth-order solution, which it equals.
        y_new.copy_from_slice(&stage);
        for i in 0..n {
            err[i] = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
        }
        let e = norm(&err, &y, &y_new, o);
        let fac11 = e.powf(expo1);
        if e <= 1.0 {
            run.accepted += 1;
            let t_new = if last { t_end } else { t + h };
            while next_out < t_out.len() && t_out[next_out] <= t_new {
                let theta = (t_out[next_out] - t) / h;
                let th1 = 1.0 - theta;
                let v: Vec<f64> = (0..n)
                    .map(|i| {
                        let r2 = y_new[i] - y[i];
                        let r3 = h * k[0][i] - r2;
                        let r4 = r2 - h * k[6][i] - r3;
                        let r5 = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
                        y[i] + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)))
                    })
                    .collect();
                run.samples.push((t_out[next_out], v));
                next_out += 1;
            }
            let k7 = k[6].clone();
            k[0].copy_from_slice(&k7);
            y.copy_from_slice(&y_new);
            t = t_new;
            let mut fac = fac11 / facold.powf(beta);
            facold = e.max(1e-4);
            fac = (fac / safe).clamp(0.1, 5.0);
            let mut h_new = h / fac;
            if last_reject {
                h_new = h_new.min(h);
            }
            last_reject = false;
            h = h_new;
        } else {
            run.rejected += 1;
            last_reject = true;
            h /= (fac11 / safe).min(5.0);
        }
    }
    Ok(run)
}
