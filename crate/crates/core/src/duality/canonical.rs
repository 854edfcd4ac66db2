use super::{ParamCurve, ParamMap};
use crate::error::{Error, Result};
use crate::funcore::Interval;
use crate::jet::Jet;
use crate::par;
use crate::quadrature::{integrate, QuadConfig};
use std::sync::Arc;

/// Curve reparametrized by `t(s) = t0 + integral from s0 of x'/y`.
#[derive(Debug)]
struct Reparametrized {
    base: ParamCurve,
    s: Vec<f64>,
    t: Vec<f64>,
    domain: Interval,
}

impl Reparametrized {
    fn speed(&self, s: f64) -> Result<Jet> {
        let (x, y) = self.base.jets(s)?;
        Ok(Jet::new(x.d1, x.d2, x.d3, x.d4, 0.0) * y.recip())
    }

    fn solve_s(&self, t: f64) -> Result<f64> {
        let i = self.t.partition_point(|&v| v <= t).clamp(1, self.t.len() - 1) - 1;
        let (s0, t0) = (self.s[i], self.t[i]);
        let (s1, t1) = (self.s[i + 1], self.t[i + 1]);
        let mut s = s0 + (s1 - s0) * (t - t0) / (t1 - t0);
        let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-15, max_intervals: 500 };
        for _ in 0..50 {
            let ts = t0 + integrate(|u| self.speed(u).map(|j| j.value).unwrap_or(f64::NAN), s0, s, &cfg)?;
            let g = ts - t;
            let step = g / self.speed(s)?.value;
            s = (s - step).clamp(s0.min(s1), s0.max(s1));
            if step.abs() <= 1e-15 * (1.0 + s.abs()) || g.abs() <= 1e-15 * (1.0 + t.abs()) {
                return Ok(s);
            }
        }
        Err(Error::Convergence { what: format!("inverting canonical time at t = {t}"), achieved: f64::NAN })
    }
}

impl ParamMap for Reparametrized {
    fn jets(&self, t: f64) -> Result<(Jet, Jet)> {
        let s = self.solve_s(t)?;
        let tp = self.speed(s)?;
        // Derivatives of the inverse map s(t) from those of t(s).
        let (t1, t2, t3, t4) = (tp.value, tp.d1, tp.d2, tp.d3);
        let s1 = 1.0 / t1;
        let s2 = -t2 * s1.powi(3);
        let s3 = (3.0 * t2 * t2 - t1 * t3) * s1.powi(5);
        let s4 = (-15.0 * t2.powi(3) + 10.0 * t1 * t2 * t3 - t1 * t1 * t4) * s1.powi(7);
        let sj = Jet::new(s, s1, s2, s3, s4);
        let (x, y) = self.base.jets(s)?;
        Ok((sj.compose(x.to_array()), sj.compose(y.to_array())))
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

/// Reparametrize `curve` on `[s_lo, s_hi]` so that `x' = y`, with `t(s0) = t0`.
pub fn canonical_parametrization(
    curve: &ParamCurve,
    s0: f64,
    t0: f64,
    s_lo: f64,
    s_hi: f64,
) -> Result<ParamCurve> {
    if !(s_lo < s_hi && s_lo <= s0 && s0 <= s_hi) {
        return Err(Error::Parameter(format!(
            "anchor {s0} must lie in [{s_lo}, {s_hi}]"
        )));
    }
    let n = 256;
    let grid = par::linspace(s_lo, s_hi, n + 1);
    let ok = |s: f64| -> Result<bool> {
        let (x, y) = curve.jets(s)?;
        Ok(y.value > 0.0 && x.d1 > 0.0)
    };
    let checks = par::try_map_grid(&grid, |&s| ok(s))?;
    if !ok(s0)? {
        return Err(Error::Range(format!("component boundary: anchor s = {s0} is inadmissible")));
    }
    let i0 = grid.partition_point(|&s| s < s0).min(n);
    let right = (i0..=n).find(|&i| !checks[i]);
    let left = (0..i0).rev().find(|&i| !checks[i]);
    let bad = right.map(|i| (i, -1i64)).or(left.map(|i| (i, 1)));
    if let Some((bad, step)) = bad {
        // Bisect between the bad node and its admissible neighbour toward s0.
        let neighbour = (bad as i64 + step) as usize;
        let mut lo = if checks.get(neighbour) == Some(&true) { grid[neighbour] } else { s0 };
        let mut hi = grid[bad];
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if ok(m)? {
                lo = m;
            } else {
                hi = m;
            }
        }
        return Err(Error::Range(format!(
            "component boundary: y > 0 and x' > 0 fail near s = {hi}"
        )));
    }
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-15, max_intervals: 500 };
    let speed = |s: f64| {
        curve.jets(s).map(|(x, y)| x.d1 / y.value).unwrap_or(f64::NAN)
    };
    let pieces = par::try_map_grid(&(0..n).collect::<Vec<_>>(), |&i| {
        integrate(speed, grid[i], grid[i + 1], &cfg)
    })?;
    let mut t = vec![0.0; n + 1];
    for i in 0..n {
        t[i + 1] = t[i] + pieces[i];
    }
    let t_at_s0 = integrate(speed, s_lo, s0, &cfg)?;
    for v in t.iter_mut() {
        *v += t0 - t_at_s0;
    }
    let domain = Interval::closed(t[0], t[n]);
    Ok(ParamCurve::canonical_from_map(Arc::new(Reparametrized {
        base: curve.clone(),
        s: grid,
        t,
        domain,
    })))
}
