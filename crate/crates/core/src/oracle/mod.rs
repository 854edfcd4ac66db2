//! Independent numerical ground truth: adaptive integration of motion in
//! central and parallel power-law fields, finite differences, and the
//! deviation and conservation metrics used to check closed forms.

mod fd;
pub mod ode;

pub use fd::{fd_derivative, fd_derivative_samples, FdEstimate};

use crate::duality::ParamCurve;
use crate::error::{Error, Result};
use crate::geom::{circumcurvature, Vec2};
use crate::orbits::PolarCurve;
use crate::par;
use ode::{dopri5, OdeOptions};
use serde::{Deserialize, Serialize};

/// Radii or heights below this end a run.
pub const SINGULAR_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Central,
    Parallel,
}

/// Central: `coefficient r^exponent` along the radius.
/// Parallel: `(0, coefficient y^exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceField {
    pub kind: FieldKind,
    pub coefficient: f64,
    pub exponent: f64,
}

impl ForceField {
    pub fn central(coefficient: f64, exponent: f64) -> Self {
        ForceField { kind: FieldKind::Central, coefficient, exponent }
    }

    pub fn parallel(coefficient: f64, exponent: f64) -> Self {
        ForceField { kind: FieldKind::Parallel, coefficient, exponent }
    }

    fn distance(&self, p: Vec2) -> f64 {
        match self.kind {
            FieldKind::Central => p.norm(),
            FieldKind::Parallel => p.y,
        }
    }

    pub fn acceleration(&self, p: Vec2) -> std::result::Result<Vec2, String> {
        let r = self.distance(p);
        if !(r >= SINGULAR_FLOOR) {
            let what = if self.kind == FieldKind::Central { "r" } else { "y" };
            return Err(format!("{what} below singular floor"));
        }
        let mag = self.coefficient * r.powf(self.exponent);
        Ok(match self.kind {
            FieldKind::Central => p * (mag / r),
            FieldKind::Parallel => Vec2::new(0.0, mag),
        })
    }

    pub fn potential(&self, p: Vec2) -> f64 {
        let r = self.distance(p);
        if self.exponent == -1.0 {
            -self.coefficient * r.ln()
        } else {
            -self.coefficient * r.powf(self.exponent + 1.0) / (self.exponent + 1.0)
        }
    }

    pub fn energy(&self, s: &MotionSample) -> f64 {
        0.5 * s.velocity.dot(s.velocity) + self.potential(s.position)
    }

    /// Angular momentum (central) or horizontal velocity (parallel).
    pub fn momentum(&self, s: &MotionSample) -> f64 {
        match self.kind {
            FieldKind::Central => s.position.wedge(s.velocity),
            FieldKind::Parallel => s.velocity.x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionSample {
    pub time: f64,
    pub position: Vec2,
    pub velocity: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForceRun {
    pub samples: Vec<MotionSample>,
    /// Why the run stopped early, if it did.
    pub partial: Option<String>,
    /// Max of `|E - E0| / (1 + |E0|)` over the samples.
    pub energy_drift: f64,
    /// Same for angular momentum or horizontal velocity.
    pub momentum_drift: f64,
    pub steps: usize,
}

pub const DEFAULT_SAMPLES: usize = 513;

/// Integrate `x'' = field(x)` to `t_end` with output at evenly spaced times.
pub fn integrate_force(field: &ForceField, init: &MotionSample, t_end: f64, tol: f64) -> Result<ForceRun> {
    let times = par::linspace(init.time, t_end, DEFAULT_SAMPLES);
    integrate_force_at(field, init, &times, tol)
}

/// Integrate with dense output at the increasing `times`.
pub fn integrate_force_at(field: &ForceField, init: &MotionSample, times: &[f64], tol: f64) -> Result<ForceRun> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(Error::Parameter(format!("tolerance {tol:e} outside [1e-13, 1e-6]")));
    }
    let s0 = [init.position.x, init.position.y, init.velocity.x, init.velocity.y];
    if s0.iter().any(|v| !v.is_finite()) || !field.coefficient.is_finite() || !field.exponent.is_finite() {
        return Err(Error::Parameter("non-finite initial state or field".into()));
    }
    if field.acceleration(init.position).is_err() {
        return Err(Error::Parameter("initial position outside the field's domain".into()));
    }
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let a = field.acceleration(Vec2::new(y[0], y[1]))?;
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = a.x;
        dy[3] = a.y;
        Ok(())
    };
    let run = dopri5(&rhs, init.time, &s0, times, &OdeOptions::with_tol(tol))?;
    let samples: Vec<MotionSample> = run
        .samples
        .iter()
        .map(|(t, y)| MotionSample { time: *t, position: Vec2::new(y[0], y[1]), velocity: Vec2::new(y[2], y[3]) })
        .collect();
    let (e0, m0) = (field.energy(init), field.momentum(init));
    let drift = |g: &dyn Fn(&MotionSample) -> f64, v0: f64| {
        samples.iter().map(|s| (g(s) - v0).abs() / (1.0 + v0.abs())).fold(0.0, f64::max)
    };
    Ok(ForceRun {
        energy_drift: drift(&|s| field.energy(s), e0),
        momentum_drift: drift(&|s| field.momentum(s), m0),
        partial: run.stopped,
        steps: run.accepted,
        samples,
    })
}

/// Curve an integrated run is checked against.
#[derive(Debug, Clone, Copy)]
pub enum Claim<'a> {
    /// `r f(theta) = 1`
    Polar(&'a PolarCurve),
    /// Graph-like curve with `x' > 0`; deviation measured vertically.
    Param(&'a ParamCurve),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HodographStats {
    pub mean: f64,
    pub stddev: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitCheck {
    pub max_geometric_deviation: f64,
    /// Mean of `x wedge v`, twice the areal velocity.
    pub area_rate: f64,
    /// Max relative deviation of `x wedge v` from its mean.
    pub area_rate_deviation: f64,
    pub hodograph: HodographStats,
}

/// Compare sampled motion with a claimed orbit.
pub fn verify_orbit(samples: &[MotionSample], claim: Claim<'_>) -> Result<OrbitCheck> {
    if samples.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} samples; hodograph statistics need at least 5",
            samples.len()
        )));
    }
    let max_geometric_deviation = match claim {
        Claim::Polar(curve) => {
            let mut theta = samples[0].position.angle();
            let mut prev = theta;
            let mut dev = 0.0f64;
            for s in samples {
                let a = s.position.angle();
                let mut step = a - prev;
                step -= std::f64::consts::TAU * (step / std::f64::consts::TAU).round();
                theta += step;
                prev = a;
                let f = curve.f.value(theta)?;
                dev = dev.max((s.position.norm() * f - 1.0).abs());
            }
            dev
        }
        Claim::Param(curve) => {
            let d = curve.domain();
            let mut guess = match (d.lo.is_finite(), d.hi.is_finite()) {
                (true, true) => 0.5 * (d.lo + d.hi),
                (true, false) => d.lo + 1.0,
                (false, true) => d.hi - 1.0,
                (false, false) => 0.0,
            };
            let mut dev = 0.0f64;
            for s in samples {
                let u = curve.invert_x(s.position.x, guess)?;
                guess = u;
                dev = dev.max((curve.point(u)?.y - s.position.y).abs());
            }
            dev
        }
    };
    let rates: Vec<f64> = samples.iter().map(|s| s.position.wedge(s.velocity)).collect();
    let area_rate = rates.iter().sum::<f64>() / rates.len() as f64;
    let area_rate_deviation =
        rates.iter().map(|r| (r - area_rate).abs()).fold(0.0, f64::max) / area_rate.abs().max(1e-300);
    let kappas: Vec<f64> = samples
        .windows(3)
        .map(|w| circumcurvature(w[0].velocity, w[1].velocity, w[2].velocity))
        .collect();
    let mean = kappas.iter().sum::<f64>() / kappas.len() as f64;
    let var = kappas.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / kappas.len() as f64;
    Ok(OrbitCheck {
        max_geometric_deviation,
        area_rate,
        area_rate_deviation,
        hodograph: HodographStats { mean, stddev: var.sqrt(), count: kappas.len() },
    })
}
