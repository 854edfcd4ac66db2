//! Surfaces of revolution `(f(v) cos u, F(v), f(v) sin u)` swept by a
//! canonical pair `(F, f)` about the x-axis.

use crate::error::{Error, Result};
use crate::funcore::ScalarFunction;
use crate::oracle::ode::{dopri5, OdeOptions};
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct RevolutionSurface {
    pub f: ScalarFunction,
    /// Parameter at which the primitive `F` vanishes.
    pub v_ref: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub gauss: f64,
}

/// Nonzero Christoffel symbols in the `(u, v)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Christoffel {
    /// `Gamma^u_{uv}`
    pub u_uv: f64,
    /// `Gamma^v_{uu}`
    pub v_uu: f64,
    /// `Gamma^v_{vv}`
    pub v_vv: f64,
}

impl RevolutionSurface {
    pub fn new(f: ScalarFunction, v_ref: f64) -> Result<Self> {
        if !f.contains(v_ref) {
            return Err(Error::domain(v_ref, f.domain()));
        }
        Ok(RevolutionSurface { f, v_ref })
    }

    fn positive_jet(&self, v: f64) -> Result<crate::Jet> {
        let j = self.f.jet(v)?;
        if !(j.value > 0.0) {
            return Err(Error::Domain { t: v, domain: "profile must be positive".into() });
        }
        Ok(j)
    }

    pub fn point(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        let r = self.positive_jet(v)?.value;
        Ok([r * u.cos(), self.f.primitive(self.v_ref, v)?, r * u.sin()])
    }

    pub fn christoffel(&self, v: f64) -> Result<Christoffel> {
        let j = self.positive_jet(v)?;
        let g = j.value * j.value + j.d1 * j.d1;
        Ok(Christoffel {
            u_uv: j.d1 / j.value,
            v_uu: -j.value * j.d1 / g,
            v_vv: j.d1 * (j.value + j.d2) / g,
        })
    }

    /// Geodesic from `(u, v)` with initial velocity `(du, dv)`, sampled at
    /// the increasing parameters `s`; rows are `(u, v, du, dv)`.
    pub fn geodesic(&self, start: [f64; 2], velocity: [f64; 2], s: &[f64], tol: f64) -> Result<Vec<[f64; 4]>> {
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            let c = self.christoffel(y[1]).map_err(|e| e.to_string())?;
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = -2.0 * c.u_uv * y[2] * y[3];
            dy[3] = -c.v_uu * y[2] * y[2] - c.v_vv * y[3] * y[3];
            Ok(())
        };
        let s0 = s.first().copied().unwrap_or(0.0);
        let y0 = [start[0], start[1], velocity[0], velocity[1]];
        let run = dopri5(&rhs, s0, &y0, s, &OdeOptions::with_tol(tol))?;
        if let Some(why) = run.stopped {
            return Err(Error::Range(format!("geodesic left the surface: {why}")));
        }
        Ok(run.samples.into_iter().map(|(_, y)| [y[0], y[1], y[2], y[3]]).collect())
    }
}

/// First and second fundamental forms and Gaussian curvature at height
/// parameter `v`; all are independent of the rotation angle.
pub fn revolution_forms(surface: &RevolutionSurface, v: f64) -> Result<FundamentalForms> {
    let j = surface.positive_jet(v)?;
    let (f, f1, f2) = (j.value, j.d1, j.d2);
    let g = f * f + f1 * f1;
    let root = g.sqrt();
    let l = f * f / root;
    let n = (f1 * f1 - f * f2) / root;
    let e = f * f;
    Ok(FundamentalForms { e, f: 0.0, g, l, m: 0.0, n, gauss: (l * n) / (e * g) })
}
