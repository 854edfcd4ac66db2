//! Polar orbits `r f(theta) = 1` under central forces.

mod catalog;
mod detector;

pub use catalog::{closed_form_orbit, OrbitLaw};
pub use detector::{
    detect_power_law, detect_power_law_samples, Degenerate, PowerLawReport, TOL_CLOSED_FORM,
    TOL_SAMPLED,
};

use crate::error::{Error, Result};
use crate::funcore::ScalarFunction;
use crate::geom::Vec2;
use crate::jet::Jet;
use crate::quadrature::QuadConfig;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct PolarCurve {
    pub f: ScalarFunction,
    /// Sign of `d theta / dt`.
    pub orientation: f64,
}

impl PolarCurve {
    pub fn new(f: ScalarFunction) -> Self {
        PolarCurve { f, orientation: 1.0 }
    }

    pub fn with_orientation(f: ScalarFunction, orientation: f64) -> Result<Self> {
        if orientation != 1.0 && orientation != -1.0 {
            return Err(Error::Parameter("orientation must be +1 or -1".into()));
        }
        Ok(PolarCurve { f, orientation })
    }

    pub fn radius(&self, theta: f64) -> Result<f64> {
        Ok(1.0 / self.f.value(theta)?)
    }

    /// Jets in `theta` of the Cartesian coordinates `cos/f` and `sin/f`.
    pub fn position_jets(&self, theta: f64) -> Result<(Jet, Jet)> {
        let r = self.f.jet(theta)?.recip();
        let th = Jet::variable(theta);
        Ok((th.cos() * r, th.sin() * r))
    }
}

/// `f + f'' - c f^alpha`.
pub fn ns_residual(curve: &PolarCurve, c: f64, alpha: f64, theta: f64) -> Result<f64> {
    let j = curve.f.jet(theta)?;
    Ok(j.value + j.d2 - c * j.value.powf(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Curvatures {
    pub kappa: f64,
    pub kappa_aff: f64,
    /// Curvature of the hodograph; a signed infinity on straight-line motion.
    pub kappa_h: f64,
    pub hodograph_degenerate: bool,
}

pub fn curvatures(curve: &PolarCurve, theta: f64) -> Result<Curvatures> {
    let j = curve.f.jet(theta)?;
    Ok(curvatures_from_jet(j.value, j.d1, j.d2))
}

pub fn curvatures_from_jet(f: f64, d1: f64, d2: f64) -> Curvatures {
    let b = f + d2;
    let f3 = f * f * f;
    let g = f * f + d1 * d1;
    let degenerate = b.abs() <= 1e-12 * (1.0 + f.abs());
    Curvatures {
        kappa: f3 * b / (g * g.sqrt()),
        kappa_aff: f3 * b,
        kappa_h: if degenerate { f64::INFINITY.copysign(b) } else { 1.0 / b },
        hodograph_degenerate: degenerate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kinematics {
    pub position: Vec2,
    pub velocity: Vec2,
    pub acceleration: Vec2,
    pub hodograph: Vec2,
    pub dtheta_dt: f64,
}

/// State of the body at angle `theta` when the areal speed is `1/2`.
pub fn orbit_kinematics(curve: &PolarCurve, theta: f64) -> Result<Kinematics> {
    let j = curve.f.jet(theta)?;
    let (s, c) = theta.sin_cos();
    let (f, f1) = (j.value, j.d1);
    let sg = curve.orientation;
    let velocity = Vec2::new(-(s * f + c * f1), c * f - s * f1) * sg;
    let mag = f * f * (f + j.d2);
    Ok(Kinematics {
        position: Vec2::new(c, s) * (1.0 / f),
        velocity,
        acceleration: Vec2::new(c, s) * (-mag),
        hodograph: velocity,
        dtheta_dt: sg * f * f,
    })
}

/// Elapsed time from `theta0` to `theta`: the integral of `f^-2`.
pub fn area_time_map(curve: &PolarCurve, theta0: f64, theta: f64) -> Result<f64> {
    let v = curve
        .f
        .integrate_map(theta0, theta, &QuadConfig::default(), |j| 1.0 / (j.value * j.value))?;
    Ok(curve.orientation * v)
}

/// Central affine curvature from the wedge formula
/// `x' ^ x'' / (x ^ x')^3`, valid in any parametrization.
pub fn wedge_affine_curvature(x: Vec2, dx: Vec2, ddx: Vec2) -> f64 {
    dx.wedge(ddx) / x.wedge(dx).powi(3)
}
