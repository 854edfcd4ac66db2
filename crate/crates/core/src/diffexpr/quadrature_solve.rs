//! Branchwise quadrature solutions of
//!
//! * kind A: `f^2 + f'^2 = phi(f)`
//! * kind C: `f f'' - f'^2 = rho(f)`
//!
//! Both reduce to a first-order problem `z'^2 = S(z)` for `z = f` (kind A)
//! or `z = ln f` (kind C). The time to travel from `z0` to `z` is the
//! integral of `S^(-1/2)`; nodes are found by inverting it, and the
//! solution is interpolated with quintic Hermite pieces using `z, z', z''`.

use crate::error::{Error, Result};
use crate::funcore::{Interval, Profile, ScalarFunction};
use crate::jet::Jet;
use crate::quadrature::{integrate, QuadConfig};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    A,
    C,
}

/// Natural cubic spline through tabulated points.
#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::Input("spline needs at least 3 matching points".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Input("spline abscissae must be strictly increasing".into()));
        }
        // Tridiagonal solve for second derivatives.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let cc = h1 / 6.0;
            let rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
            let denom = b - a * c[i - 1];
            c[i] = cc / denom;
            r[i] = (rhs - a * r[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = r[i] - c[i] * m[i + 1];
        }
        Ok(Spline { x, y, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().expect("non-empty"))
    }

    /// Value and first three derivatives.
    pub fn eval(&self, u: f64) -> [f64; 4] {
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= u) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - u) / h;
        let b = (u - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i] + b * self.y[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h / 6.0 * m0
            + (3.0 * b * b - 1.0) * h / 6.0 * m1;
        let d2 = a * m0 + b * m1;
        let d3 = (m1 - m0) / h;
        [v, d1, d2, d3]
    }
}

/// Right-hand side `phi` or `rho` as a function of `u = f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Rhs {
    /// `sum c_i u^(e_i) + log_coef ln u`
    Powers { terms: Vec<(f64, f64)>, log_coef: f64 },
    Tabulated(Spline),
}

impl Rhs {
    pub fn power(coef: f64, exponent: f64) -> Self {
        Rhs::Powers { terms: vec![(coef, exponent)], log_coef: 0.0 }
    }

    /// `2 c ln u + b`, the energy integral of the `alpha = -1` law.
    pub fn log_law(c: f64, b: f64) -> Self {
        Rhs::Powers { terms: vec![(b, 0.0)], log_coef: 2.0 * c }
    }

    /// Value and four derivatives in `u`.
    pub fn derivs(&self, u: f64) -> [f64; 5] {
        match self {
            Rhs::Powers { terms, log_coef } => {
                let mut out = [0.0; 5];
                for &(c, e) in terms {
                    let mut coef = c;
                    for (k, slot) in out.iter_mut().enumerate() {
                        if k > 0 {
                            coef *= e - (k as f64 - 1.0);
                        }
                        if coef == 0.0 {
                            break;
                        }
                        *slot += coef * u.powf(e - k as f64);
                    }
                }
                if *log_coef != 0.0 {
                    let l = *log_coef;
                    out[0] += l * u.ln();
                    out[1] += l / u;
                    out[2] -= l / (u * u);
                    out[3] += 2.0 * l / (u * u * u);
                    out[4] -= 6.0 * l / (u * u * u * u);
                }
                out
            }
            Rhs::Tabulated(s) => {
                let [v, d1, d2, d3] = s.eval(u);
                [v, d1, d2, d3, 0.0]
            }
        }
    }

    /// Closed-form antiderivative of `rho(u) u^(-3)` where available.
    fn kind_c_antiderivative(&self, u: f64) -> Option<f64> {
        match self {
            Rhs::Powers { terms, log_coef } => {
                let mut s = 0.0;
                for &(c, e) in terms {
                    s += if e == 2.0 { c * u.ln() } else { c * u.powf(e - 2.0) / (e - 2.0) };
                }
                let lu = u.ln();
                s += log_coef * (-lu / (2.0 * u * u) - 1.0 / (4.0 * u * u));
                Some(s)
            }
            Rhs::Tabulated(_) => None,
        }
    }
}

/// Reduce `f + f'' = psi(f)` to kind A: `phi = 2 Psi + K` with `Psi' = psi`
/// and `K` fixed by the initial data `(f0, f0')`.
pub fn rhs_from_b(psi: &[(f64, f64)], f0: f64, df0: f64) -> Rhs {
    let mut terms = Vec::new();
    let mut log_coef = 0.0;
    for &(c, e) in psi {
        if e == -1.0 {
            log_coef += 2.0 * c;
        } else {
            terms.push((2.0 * c / (e + 1.0), e + 1.0));
        }
    }
    let partial = Rhs::Powers { terms: terms.clone(), log_coef };
    let k = f0 * f0 + df0 * df0 - partial.derivs(f0)[0];
    terms.push((k, 0.0));
    Rhs::Powers { terms, log_coef }
}

#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub kind: EquationKind,
    pub rhs: Rhs,
    pub t0: f64,
    pub f0: f64,
    /// `f'(t0)`; required for kind C, ignored for kind A.
    pub slope: Option<f64>,
    /// Sign of `f'` for kind A away from a turning point.
    pub direction: f64,
    pub t_end: f64,
    pub intervals: usize,
    /// Accept an initial point where the square-root argument vanishes; the
    /// branch then leaves in the only admissible direction.
    pub allow_turning_start: bool,
}

impl QuadratureSpec {
    pub fn kind_a(rhs: Rhs, t0: f64, f0: f64, direction: f64, t_end: f64) -> Self {
        QuadratureSpec {
            kind: EquationKind::A,
            rhs,
            t0,
            f0,
            slope: None,
            direction,
            t_end,
            intervals: 256,
            allow_turning_start: false,
        }
    }

    pub fn kind_c(rhs: Rhs, t0: f64, f0: f64, slope: f64, t_end: f64) -> Self {
        QuadratureSpec {
            kind: EquationKind::C,
            rhs,
            t0,
            f0,
            slope: Some(slope),
            direction: slope.signum(),
            t_end,
            intervals: 256,
            allow_turning_start: false,
        }
    }
}

/// `S(z)` and its first three derivatives.
struct Speed {
    kind: EquationKind,
    rhs: Rhs,
    z0: f64,
    /// Kind C: `w0'^2` and the antiderivative value at `f0`.
    s0: f64,
    anti0: f64,
}

impl Speed {
    fn eval(&self, z: f64) -> [f64; 4] {
        match self.kind {
            EquationKind::A => {
                let [p, p1, p2, p3, _] = self.rhs.derivs(z);
                [p - z * z, p1 - 2.0 * z, p2 - 2.0, p3]
            }
            EquationKind::C => {
                let r = self.r_jet(z);
                [self.s0 + 2.0 * self.integral_r(z), 2.0 * r.value, 2.0 * r.d1, 2.0 * r.d2]
            }
        }
    }

    fn s(&self, z: f64) -> f64 {
        self.eval(z)[0]
    }

    /// `R(w) = rho(e^w) e^(-2w)` as a jet in `w`.
    fn r_jet(&self, w: f64) -> Jet {
        let u = Jet::variable(w).exp();
        u.compose(self.rhs.derivs(u.value)) * Jet::affine(w, -2.0, 0.0).exp()
    }

    fn integral_r(&self, w: f64) -> f64 {
        match self.rhs.kind_c_antiderivative(w.exp()) {
            Some(a) => a - self.anti0,
            None => integrate(|v| self.r_jet(v).value, self.z0, w, &QuadConfig::default())
                .unwrap_or(f64::NAN),
        }
    }
}

struct Branch {
    speed: Speed,
    z0: f64,
    /// Direction of travel in `z` as elapsed time grows.
    sigma: f64,
    turning_start: bool,
    /// `S` and derivatives at `z0`.
    start: [f64; 4],
    cfg: QuadConfig,
}

impl Branch {
    fn admissible(&self, z: f64) -> bool {
        z.is_finite()
            && (self.speed.kind == EquationKind::C || z > 0.0)
            && self.speed.s(z) > 0.0
    }

    /// Elapsed time from `za` (reached at `ea`) to `z`.
    fn elapsed(&self, za: f64, ea: f64, z: f64) -> Result<f64> {
        if za == self.z0 && self.turning_start {
            let smax = (z - self.z0).abs().sqrt();
            let sg = self.sigma;
            let v = integrate(
                |s| {
                    let s2 = s * s;
                    if s2 < 1e-6 * (1.0 + self.z0.abs()) {
                        // S vanishes at z0; divide s^2 out of its Taylor series.
                        let [_, d1, d2, d3] = self.start;
                        let q = sg * d1 + 0.5 * d2 * s2 + sg * d3 * s2 * s2 / 6.0;
                        return 2.0 / q.sqrt();
                    }
                    let sv = self.speed.s(self.z0 + sg * s2);
                    2.0 * s / sv.sqrt()
                },
                0.0,
                smax,
                &self.cfg,
            )?;
            return Ok(ea + v);
        }
        let v = integrate(|v| 1.0 / self.speed.s(v).sqrt(), za, z, &self.cfg)?;
        Ok(ea + self.sigma * v)
    }

    /// Find `z` with elapsed time `tau`, starting from `(za, ea)`.
    fn advance(&self, za: f64, ea: f64, tau: f64) -> Result<f64> {
        let dtau = tau - ea;
        if dtau <= 0.0 {
            return Ok(za);
        }
        let [s, s1, ..] = self.speed.eval(za);
        // Taylor predictor in elapsed time.
        let mut step = (s.max(0.0).sqrt() * dtau + 0.5 * self.sigma * s1 * dtau * dtau).abs();
        if !(step > 0.0) {
            step = 1e-6 * (1.0 + za.abs());
        }
        let (mut lo, mut elo) = (za, ea);
        let mut hi = None;
        for _ in 0..200 {
            let z = lo + self.sigma * step;
            if !self.admissible(z) {
                hi = Some(z);
                break;
            }
            let e = self.elapsed(lo, elo, z)?;
            if e >= tau {
                hi = Some(z);
                break;
            }
            lo = z;
            elo = e;
            step *= 2.0;
        }
        let mut hi = hi.ok_or_else(|| Error::Range(format!("elapsed time {tau} not reached")))?;
        // Safeguarded Newton inside the bracket [lo, hi] (oriented by sigma).
        let mut z = lo;
        let mut ez = elo;
        for _ in 0..200 {
            let g = ez - tau;
            if g.abs() <= 1e-15 * (1.0 + tau) {
                return Ok(z);
            }
            let sz = self.speed.s(z);
            let mut cand = z - self.sigma * g * sz.max(0.0).sqrt();
            let inside = (cand - lo) * self.sigma > 0.0 && (hi - cand) * self.sigma > 0.0;
            if !inside || !self.admissible(cand) {
                cand = 0.5 * (lo + hi);
            }
            if !self.admissible(cand) {
                hi = cand;
                if (hi - lo).abs() <= 1e-15 * (1.0 + lo.abs()) {
                    break;
                }
                continue;
            }
            let ec = self.elapsed(lo, elo, cand)?;
            if ec < tau {
                lo = cand;
                elo = ec;
            } else {
                hi = cand;
            }
            z = cand;
            ez = ec;
            if (hi - lo).abs() <= 1e-15 * (1.0 + lo.abs()) {
                let g = ez - tau;
                if g.abs() <= 1e-11 * (1.0 + tau) {
                    return Ok(z);
                }
                break;
            }
        }
        let value = match self.speed.kind {
            EquationKind::A => lo,
            EquationKind::C => lo.exp(),
        };
        Err(Error::Range(format!(
            "branch cannot reach elapsed time {tau}: it ends near f = {value} after {elo}"
        )))
    }
}

#[derive(Debug)]
struct QuadratureSolution {
    kind: EquationKind,
    t: Vec<f64>,
    z: Vec<f64>,
    dz: Vec<f64>,
    d2z: Vec<f64>,
    speed: SpeedTable,
    domain: Interval,
}

/// Shared speed evaluator kept inside the profile.
struct SpeedTable(Speed);

impl fmt::Debug for SpeedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Speed({:?})", self.0.kind)
    }
}

impl Profile for QuadratureSolution {
    fn jet(&self, t: f64) -> Result<Jet> {
        if !self.domain.contains(t) {
            return Err(Error::domain(t, self.domain));
        }
        let n = self.t.len();
        let asc = self.t[n - 1] > self.t[0];
        let pos = if asc {
            self.t.partition_point(|&x| x <= t)
        } else {
            self.t.partition_point(|&x| x >= t)
        };
        let i = pos.clamp(1, n - 1) - 1;
        let h = self.t[i + 1] - self.t[i];
        let s = (t - self.t[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);
        let hb = [
            1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
            s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
            0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
            10.0 * s3 - 15.0 * s4 + 6.0 * s5,
            -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
            0.5 * s3 - s4 + 0.5 * s5,
        ];
        let db = [
            -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
            30.0 * s2 - 60.0 * s3 + 30.0 * s4,
            -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
            1.5 * s2 - 4.0 * s3 + 2.5 * s4,
        ];
        let coef = [
            self.z[i],
            h * self.dz[i],
            h * h * self.d2z[i],
            self.z[i + 1],
            h * self.dz[i + 1],
            h * h * self.d2z[i + 1],
        ];
        let z: f64 = hb.iter().zip(&coef).map(|(a, b)| a * b).sum();
        let z1: f64 = db.iter().zip(&coef).map(|(a, b)| a * b).sum::<f64>() / h;
        let [_, s1, s2d, s3d] = self.speed.0.eval(z);
        let z2 = 0.5 * s1;
        let z3 = 0.5 * s2d * z1;
        let z4 = 0.5 * s3d * z1 * z1 + 0.5 * s2d * z2;
        let zj = Jet::new(z, z1, z2, z3, z4);
        Ok(match self.kind {
            EquationKind::A => zj,
            EquationKind::C => zj.exp(),
        })
    }

    fn domain(&self) -> Interval {
        self.domain
    }

    fn describe(&self) -> String {
        format!(
            "quadrature_solution(kind {:?}, t in [{}, {}])",
            self.kind,
            self.t[0],
            self.t[self.t.len() - 1]
        )
    }
}

/// Solve one monotone branch from `(t0, f0)` toward `t_end`.
pub fn solve_quadrature(spec: &QuadratureSpec) -> Result<ScalarFunction> {
    if !(spec.f0 > 0.0 && spec.f0.is_finite()) {
        return Err(Error::Parameter("initial value must be positive".into()));
    }
    if spec.intervals < 2 {
        return Err(Error::Parameter("need at least 2 intervals".into()));
    }
    if !(spec.t_end != spec.t0 && spec.t_end.is_finite()) {
        return Err(Error::Parameter("t_end must differ from t0".into()));
    }
    let tdir = (spec.t_end - spec.t0).signum();
    let (z0, s0, anti0, zdir) = match spec.kind {
        EquationKind::A => (spec.f0, 0.0, 0.0, spec.direction.signum()),
        EquationKind::C => {
            let slope = spec
                .slope
                .ok_or_else(|| Error::Parameter("kind C needs the initial slope f'(t0)".into()))?;
            let w1 = slope / spec.f0;
            let anti0 = spec.rhs.kind_c_antiderivative(spec.f0).unwrap_or(0.0);
            (spec.f0.ln(), w1 * w1, anti0, slope.signum())
        }
    };
    let speed = Speed { kind: spec.kind, rhs: spec.rhs.clone(), z0, s0, anti0 };
    let [sv, s1, s2, s3] = speed.eval(z0);
    let scale = 1e-13 * (1.0 + z0 * z0);
    let turning = sv.abs() <= scale;
    if sv < -scale || (turning && !spec.allow_turning_start) {
        return Err(Error::TurningPoint { value: spec.f0 });
    }
    let sigma = if turning {
        if s1 == 0.0 {
            return Err(Error::Degenerate(format!("equilibrium at f = {}", spec.f0)));
        }
        s1.signum()
    } else {
        if zdir == 0.0 {
            return Err(Error::Parameter("direction must be nonzero".into()));
        }
        zdir * tdir
    };
    let branch = Branch {
        speed,
        z0,
        sigma,
        turning_start: turning,
        start: [sv, s1, s2, s3],
        cfg: QuadConfig { abs_tol: 1e-14, rel_tol: 1e-15, max_intervals: 4000 },
    };

    let n = spec.intervals;
    let h = (spec.t_end - spec.t0) / n as f64;
    let mut t = Vec::with_capacity(n + 1);
    let mut z = Vec::with_capacity(n + 1);
    let (mut za, mut ea) = (z0, 0.0);
    for i in 0..=n {
        let ti = if i == n { spec.t_end } else { spec.t0 + h * i as f64 };
        let tau = (ti - spec.t0).abs();
        let zi = branch.advance(za, ea, tau)?;
        t.push(ti);
        z.push(zi);
        ea = tau;
        za = zi;
    }
    let mut dz = Vec::with_capacity(n + 1);
    let mut d2z = Vec::with_capacity(n + 1);
    for (i, &zi) in z.iter().enumerate() {
        let [s, s1, ..] = branch.speed.eval(zi);
        let v = if i == 0 && turning { 0.0 } else { s.max(0.0).sqrt() };
        // dz/dt = sigma * tdir * sqrt(S)
        dz.push(sigma * tdir * v);
        d2z.push(0.5 * s1);
    }
    let domain = Interval::closed(spec.t0.min(spec.t_end), spec.t0.max(spec.t_end));
    Ok(ScalarFunction::from_profile(Arc::new(QuadratureSolution {
        kind: spec.kind,
        t,
        z,
        dz,
        d2z,
        speed: SpeedTable(branch.speed),
        domain,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_cubic_interior() {
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = Spline::new(x, y).unwrap();
        let [v, d1, ..] = s.eval(1.234);
        assert!((v - 1.234f64.sin()).abs() < 1e-5);
        assert!((d1 - 1.234f64.cos()).abs() < 1e-3);
    }

    #[test]
    fn rhs_power_derivatives() {
        let r = Rhs::power(2.0, 3.0);
        assert_eq!(r.derivs(2.0), [16.0, 24.0, 24.0, 12.0, 0.0]);
    }

    #[test]
    fn b_reduction_matches_initial_energy() {
        let r = rhs_from_b(&[(1.0, 0.0)], 1.5, 0.0);
        // phi = 2u + K with phi(1.5) = 2.25
        let d = r.derivs(1.5);
        assert!((d[0] - 2.25).abs() < 1e-15);
        assert!((d[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn circle_turning_start_errors() {
        let spec = QuadratureSpec::kind_a(Rhs::power(1.0, 0.0), 0.0, 1.0, -1.0, 0.5);
        assert_eq!(solve_quadrature(&spec).unwrap_err(), Error::TurningPoint { value: 1.0 });
    }
}
