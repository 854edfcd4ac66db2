use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};
use serde::Serialize;

/// Heights below this (or above its reciprocal) end the solution.
const SINGULAR_FLOOR: f64 = 1e-8;

/// Catalog member whose transform reproduces the motion.
///
/// `Y = y^d` is a quadratic in `X`, with `dX/dtau = d y^(d-1)`, `dY/dX = v`
/// and `d^2Y/dX^2 = a/d`; that parabola in canonical form `(F, f)` with
/// `f(u) = Y` is the named form, started at `u = u0`. For `d = 0` the
/// same holds with `Y = ln y` and `dX/dtau = 1/y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalileanMatch {
    pub form: String,
    pub d: f64,
    pub params: Vec<(String, f64)>,
    pub u0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectilinearSolution {
    pub alpha: f64,
    pub a: f64,
    /// `(tau, y, v)`
    pub samples: Vec<(f64, f64, f64)>,
    pub galilean: GalileanMatch,
    /// Max relative drift of `v^2/2 - a y^(alpha+1)/(alpha+1)`.
    pub energy_drift: f64,
    /// Set when the motion leaves the admissible range before the last time.
    pub partial: Option<String>,
    pub notes: Vec<String>,
}

struct Reduced {
    d: f64,
    a: f64,
    y0: f64,
    v0: f64,
}

impl Reduced {
    fn curvature(&self) -> f64 {
        if self.d == 0.0 {
            self.a
        } else {
            self.a / self.d
        }
    }

    fn big_y(&self, x: f64) -> f64 {
        let base = if self.d == 0.0 { self.y0.ln() } else { self.y0.powf(self.d) };
        base + x * (self.v0 + 0.5 * self.curvature() * x)
    }

    fn height(&self, x: f64) -> f64 {
        let y = self.big_y(x);
        if self.d == 0.0 {
            y.exp()
        } else if y > 0.0 {
            y.powf(1.0 / self.d)
        } else {
            f64::NAN
        }
    }

    /// `dtau/dX`.
    fn rate(&self, x: f64) -> f64 {
        let y = self.height(x);
        if self.d == 0.0 {
            y
        } else {
            y.powf(1.0 - self.d) / self.d
        }
    }

    fn direction(&self) -> f64 {
        if self.d < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// First `X` along the direction of increasing time where `y` reaches
    /// the floor or the ceiling.
    fn exit(&self) -> Option<f64> {
        let dir = self.direction();
        let level = |h: f64| if self.d == 0.0 { h.ln() } else { h.powf(self.d) };
        let base = self.big_y(0.0);
        let (p, q) = (0.5 * self.curvature(), self.v0);
        [level(SINGULAR_FLOOR), level(1.0 / SINGULAR_FLOOR)]
            .into_iter()
            .flat_map(|target| quadratic_roots(p, q, base - target))
            .filter(|r| r * dir > 0.0)
            .min_by(|a, b| (a * dir).total_cmp(&(b * dir)))
    }

    fn galilean(&self) -> GalileanMatch {
        let d = self.d;
        let p = |v: &[(&str, f64)]| v.iter().map(|(k, x)| (k.to_string(), *x)).collect();
        if d == 0.0 {
            return GalileanMatch {
                form: "exp_quadratic".into(),
                d,
                params: p(&[("k", 1.0), ("q2", 0.5 * self.a), ("q1", self.v0), ("q0", self.y0.ln())]),
                u0: 0.0,
            };
        }
        let big_a = self.curvature();
        let f0 = self.big_y(0.0);
        if big_a == 0.0 {
            return GalileanMatch {
                form: "line".into(),
                d,
                params: p(&[("c0", f0), ("c1", self.v0)]),
                u0: 0.0,
            };
        }
        let vertex = f0 - self.v0 * self.v0 / (2.0 * big_a);
        let xc = -self.v0 / big_a;
        let af = 0.5 * big_a.abs();
        if big_a < 0.0 {
            let w = (af * vertex).sqrt();
            let u0 = (w * self.v0 / (big_a * vertex)).atanh() / w;
            return GalileanMatch {
                form: "logistic_plus".into(),
                d,
                params: p(&[("a", af), ("b", 0.0), ("c", 2.0 * w / af)]),
                u0,
            };
        }
        if vertex.abs() <= 1e-13 * f0 {
            GalileanMatch {
                form: "inverse_square_t".into(),
                d,
                params: p(&[("a", af)]),
                u0: 1.0 / (af * xc),
            }
        } else if vertex > 0.0 {
            let w = (af * vertex).sqrt();
            GalileanMatch {
                form: "sec_sq".into(),
                d,
                params: p(&[("a", af), ("c", w / af)]),
                u0: (-xc * w / vertex).atan() / w,
            }
        } else {
            let amp = -vertex;
            let w = (af * amp).sqrt();
            GalileanMatch {
                form: "logistic_minus".into(),
                d,
                params: p(&[("a", af), ("b", 0.0), ("c", 2.0 * w / af)]),
                u0: (amp / (xc * w)).atanh() / w,
            }
        }
    }
}

fn quadratic_roots(p: f64, q: f64, r: f64) -> Vec<f64> {
    if p == 0.0 {
        return if q == 0.0 { vec![] } else { vec![-r / q] };
    }
    let disc = q * q - 4.0 * p * r;
    if disc < 0.0 {
        return vec![];
    }
    let s = -0.5 * (q + q.signum() * disc.sqrt());
    if s == 0.0 {
        return vec![0.0];
    }
    vec![s / p, r / s]
}

/// Motion `y'' = a y^alpha` from `y(0) = y0 > 0`, `y'(0) = v0`, sampled at
/// the non-negative increasing times `tau`.
pub fn rectilinear_solve(alpha: f64, a: f64, y0: f64, v0: f64, tau: &[f64]) -> Result<RectilinearSolution> {
    if !(y0 > 0.0) || !y0.is_finite() || !v0.is_finite() || !a.is_finite() || !alpha.is_finite() {
        return Err(Error::Parameter("need finite alpha, a, v0 and y0 > 0".into()));
    }
    if tau.iter().any(|t| *t < 0.0) || tau.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Input("times must be non-negative and increasing".into()));
    }
    let red = Reduced { d: alpha + 1.0, a, y0, v0 };
    let dir = red.direction();
    let exit = red.exit();
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 4000 };
    // Oriented variable u = dir X, in which time increases.
    let rate_u = |u: f64| red.rate(dir * u) * dir;
    let u_end = exit.map(|x| x * dir);
    let tau_end = match u_end {
        Some(ue) => integrate(rate_u, 0.0, ue, &cfg)?,
        None => f64::INFINITY,
    };
    let energy = |y: f64, v: f64| {
        let pot = if alpha == -1.0 { a * y.ln() } else { a * y.powf(alpha + 1.0) / (alpha + 1.0) };
        0.5 * v * v - pot
    };
    let e0 = energy(y0, v0);
    let (mut u, mut t_prev) = (0.0f64, 0.0f64);
    let mut samples = Vec::with_capacity(tau.len());
    let mut partial = None;
    let mut drift = 0.0f64;
    for &target in tau {
        if target > tau_end {
            partial = Some(format!(
                "height leaves [{SINGULAR_FLOOR:e}, {:e}] at tau = {tau_end:.12e}",
                1.0 / SINGULAR_FLOOR
            ));
            break;
        }
        let mut lo = u;
        let mut hi = u_end.unwrap_or(f64::INFINITY);
        let mut next = u + (target - t_prev) / rate_u(u);
        let mut done = target == t_prev;
        for _ in 0..200 {
            if done {
                break;
            }
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if hi.is_finite() { 0.5 * (lo + hi) } else { lo + 2.0 * (lo - u).max(1.0) };
            }
            let g = t_prev + integrate(rate_u, u, next, &cfg)? - target;
            if g < 0.0 {
                lo = next;
            } else {
                hi = next;
            }
            let step = g / rate_u(next);
            let cand = next - step;
            done = g.abs() <= 1e-14 * (1.0 + target.abs()) || (hi - lo) <= 1e-15 * (1.0 + next.abs());
            next = if done { next } else { cand };
        }
        if !done {
            return Err(Error::Convergence { what: format!("time inversion at tau = {target}"), achieved: f64::NAN });
        }
        u = next;
        t_prev = target;
        let x = dir * u;
        let y = red.height(x);
        let v = v0 + red.curvature() * x;
        drift = drift.max((energy(y, v) - e0).abs() / (1.0 + e0.abs()));
        samples.push((target, y, v));
    }
    let notes = vec![
        "force law taken as y'' = a*y^alpha; the source's displayed a*y^-3 holds only for alpha = -3".to_string(),
    ];
    Ok(RectilinearSolution {
        alpha,
        a,
        samples,
        galilean: red.galilean(),
        energy_drift: drift,
        partial,
        notes,
    })
}
