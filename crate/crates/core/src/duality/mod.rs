//! Parametrized curves, canonical form `(F, f)` with `F' = f`, the
//! four-curve duality scheme, dual force laws and rectification.

mod canonical;
mod kasner;
mod rectify;

pub use canonical::canonical_parametrization;
pub use kasner::{kasner_dual_law, orbit_constant, Collapse, DualLaw, TwoPowerLaw};
pub use rectify::{rectification_check, Rectification};

use crate::error::{Error, Result};
use crate::funcore::{Interval, Profile, ScalarFunction};
use crate::geom::Vec2;
use crate::jet::Jet;
use crate::orbits::PolarCurve;
use std::fmt;
use std::sync::Arc;

/// Coordinate jets of a plane curve as functions of its parameter.
pub trait ParamMap: Send + Sync + fmt::Debug {
    fn jets(&self, s: f64) -> Result<(Jet, Jet)>;
    fn domain(&self) -> Interval;
}

/// Closed-form plane curves used as inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `(s, c0 + c1 s + c2 s^2)`
    Graph { c0: f64, c1: f64, c2: f64 },
    /// `(s, a cosh((s - s0) / a))`
    CoshGraph { a: f64, s0: f64 },
    /// `(cx - rx cos s, cy + ry sin s)`; `s` in `(0, pi)` is the upper arc
    /// traversed left to right.
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
}

impl ParamMap for Shape {
    fn jets(&self, s: f64) -> Result<(Jet, Jet)> {
        let v = Jet::variable(s);
        Ok(match *self {
            Shape::Graph { c0, c1, c2 } => (
                v,
                Jet::new(c0 + s * (c1 + s * c2), c1 + 2.0 * c2 * s, 2.0 * c2, 0.0, 0.0),
            ),
            Shape::CoshGraph { a, s0 } => (v, Jet::affine(s, 1.0 / a, -s0 / a).cosh() * a),
            Shape::Ellipse { cx, cy, rx, ry } => (v.cos() * (-rx) + cx, v.sin() * ry + cy),
        })
    }

    fn domain(&self) -> Interval {
        match self {
            Shape::Ellipse { .. } => Interval::open(0.0, std::f64::consts::PI),
            _ => Interval::REAL,
        }
    }
}

/// `(x_ref + integral of f from t_ref, f)`.
#[derive(Debug)]
struct CanonicalPair {
    f: ScalarFunction,
    t_ref: f64,
    x_ref: f64,
}

impl ParamMap for CanonicalPair {
    fn jets(&self, t: f64) -> Result<(Jet, Jet)> {
        let j = self.f.jet(t)?;
        let x = self.x_ref + self.f.primitive(self.t_ref, t)?;
        Ok((Jet::new(x, j.value, j.d1, j.d2, j.d3), j))
    }

    fn domain(&self) -> Interval {
        self.f.domain()
    }
}

#[derive(Clone, Debug)]
pub struct ParamCurve {
    map: Arc<dyn ParamMap>,
    /// Set when `x' = y` holds by construction.
    pub canonical: bool,
    profile: Option<ScalarFunction>,
}

impl ParamCurve {
    pub fn from_map(map: Arc<dyn ParamMap>) -> Self {
        ParamCurve { map, canonical: false, profile: None }
    }

    pub fn from_shape(shape: Shape) -> Self {
        ParamCurve::from_map(Arc::new(shape))
    }

    /// `(F, f)` with `F(t_ref) = x_ref`.
    pub fn canonical(f: ScalarFunction, t_ref: f64, x_ref: f64) -> Result<Self> {
        if !f.contains(t_ref) {
            return Err(Error::domain(t_ref, f.domain()));
        }
        Ok(ParamCurve {
            map: Arc::new(CanonicalPair { f: f.clone(), t_ref, x_ref }),
            canonical: true,
            profile: Some(f),
        })
    }

    pub(crate) fn canonical_from_map(map: Arc<dyn ParamMap>) -> Self {
        ParamCurve { map, canonical: true, profile: None }
    }

    pub fn jets(&self, s: f64) -> Result<(Jet, Jet)> {
        let d = self.map.domain();
        if !d.contains(s) {
            return Err(Error::Domain {
                t: s,
                domain: format!("{d} (nearest bound {})", d.nearest_bound(s)),
            });
        }
        self.map.jets(s)
    }

    pub fn point(&self, s: f64) -> Result<Vec2> {
        let (x, y) = self.jets(s)?;
        Ok(Vec2::new(x.value, y.value))
    }

    pub fn domain(&self) -> Interval {
        self.map.domain()
    }

    /// `|x' - y| / (1 + |y|)`.
    pub fn canonical_defect(&self, s: f64) -> Result<f64> {
        let (x, y) = self.jets(s)?;
        Ok((x.d1 - y.value).abs() / (1.0 + y.value.abs()))
    }

    /// The height function `f` of a canonical curve, as a function of `t`.
    pub fn profile(&self) -> Result<ScalarFunction> {
        if !self.canonical {
            return Err(Error::Input("profile requires a canonical curve".into()));
        }
        Ok(match &self.profile {
            Some(f) => f.clone(),
            None => ScalarFunction::from_profile(Arc::new(HeightProfile(self.map.clone()))),
        })
    }

    /// Parameter at which `x` takes the value `x_target`, for curves with
    /// `x' > 0`; bracketed Newton iteration.
    pub fn invert_x(&self, x_target: f64, guess: f64) -> Result<f64> {
        let d = self.domain();
        let (mut lo, mut hi) = (d.lo, d.hi);
        let mut s = guess;
        for _ in 0..200 {
            let (x, _) = self.jets(s)?;
            let g = x.value - x_target;
            if g.abs() <= 1e-14 * (1.0 + x_target.abs()) {
                return Ok(s);
            }
            if g < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let mut next = s - g / x.d1;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => 0.5 * (lo + hi),
                    (true, false) => s + 2.0 * (s - lo).abs().max(1.0),
                    (false, true) => s - 2.0 * (hi - s).abs().max(1.0),
                    _ => s - g.signum(),
                };
            }
            if (hi - lo).abs() <= 1e-15 * (1.0 + s.abs()) {
                if g.abs() <= 1e-9 * (1.0 + x_target.abs()) {
                    return Ok(s);
                }
                break;
            }
            s = next;
        }
        Err(Error::Range(format!("x = {x_target} not reached on {d}")))
    }
}

#[derive(Debug)]
struct HeightProfile(Arc<dyn ParamMap>);

impl Profile for HeightProfile {
    fn jet(&self, t: f64) -> Result<Jet> {
        Ok(self.0.jets(t)?.1)
    }
    fn domain(&self) -> Interval {
        self.0.domain()
    }
    fn describe(&self) -> String {
        "canonical_height".into()
    }
}

/// Spiral `r f(theta) = 1` to its dual `(F, f)`.
pub fn spiral_to_param(f: &ScalarFunction, t_ref: f64) -> Result<ParamCurve> {
    ParamCurve::canonical(f.clone(), t_ref, 0.0)
}

/// Dual `(F, f)` back to the spiral `r f(theta) = 1`.
pub fn param_to_spiral(curve: &ParamCurve) -> Result<PolarCurve> {
    Ok(PolarCurve::new(curve.profile()?))
}

/// The four associated curves of a positive function.
#[derive(Debug, Clone)]
pub struct Quadrality {
    /// `r f(theta) = 1`
    pub spiral: PolarCurve,
    /// `(F, f)`
    pub dual: ParamCurve,
    /// `r = f(theta)`
    pub inverse_spiral: PolarCurve,
    /// `(G, 1/f)` with `G' = 1/f`
    pub diagonal: ParamCurve,
}

pub fn quadrality(f: &ScalarFunction, t_ref: f64) -> Result<Quadrality> {
    let g = f.reciprocal();
    Ok(Quadrality {
        spiral: PolarCurve::new(f.clone()),
        dual: ParamCurve::canonical(f.clone(), t_ref, 0.0)?,
        inverse_spiral: PolarCurve::new(g.clone()),
        diagonal: ParamCurve::canonical(g, t_ref, 0.0)?,
    })
}

/// The point `(F(t), f(t))` of the dual and the spiral point it is paired with.
pub fn associated_points(q: &Quadrality, t: f64) -> Result<(Vec2, Vec2)> {
    let p = q.dual.point(t)?;
    let r = 1.0 / q.spiral.f.value(t)?;
    Ok((p, Vec2::polar(r, t)))
}
