//! Trajectories of parallel power-law forces `(0, b y^alpha)`.
//!
//! Every trajectory family is the d-transform of a constant-force parabola
//! written in canonical form `(F, f)`; the transformed curve obeys
//! `f f'' - f'^2 = b f^(2+d)` and therefore the law with `alpha = d - 1`.

mod criterion;
mod rectilinear;
mod variational;

pub use criterion::{
    expressions_from_jets, trajectory_criterion, trajectory_criterion_samples, trajectory_expressions, ParallelReport,
};
pub use rectilinear::{rectilinear_solve, GalileanMatch, RectilinearSolution};
pub use variational::{variational_residual, VariationalReport};

use crate::diffexpr::d_transform;
use crate::duality::ParamCurve;
use crate::error::{Error, Result};
use crate::funcore::{Family, ScalarFunction};
use serde::Serialize;

/// `f f'' - f'^2 = b f^beta`; the force is `b y^alpha` with `alpha = beta - 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelLaw {
    pub b: f64,
    pub beta: f64,
    pub alpha: f64,
}

impl ParallelLaw {
    pub fn new(b: f64, beta: f64) -> Self {
        ParallelLaw { b, beta, alpha: beta - 3.0 }
    }

    pub fn is_attractive(&self) -> bool {
        self.b < 0.0
    }
}

/// Canonical parabola parametrizations and the exceptional `1/y` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum TrajectoryForm {
    /// `1 / (a t^2)`
    InverseSquareT { a: f64 },
    LogisticPlus { a: f64, b: f64, c: f64 },
    LogisticMinus { a: f64, b: f64, c: f64 },
    /// `a c^2 sec^2(a c t)`
    SecSq { a: f64, c: f64 },
    /// `k exp(q2 t^2 + q1 t + q0)`; only with `d = 0`.
    ExpQuadratic { k: f64, q2: f64, q1: f64, q0: f64 },
}

impl TrajectoryForm {
    pub fn name(&self) -> &'static str {
        match self {
            TrajectoryForm::InverseSquareT { .. } => "inverse_square_t",
            TrajectoryForm::LogisticPlus { .. } => "logistic_plus",
            TrajectoryForm::LogisticMinus { .. } => "logistic_minus",
            TrajectoryForm::SecSq { .. } => "sec_sq",
            TrajectoryForm::ExpQuadratic { .. } => "exp_quadratic",
        }
    }

    /// Sign `s` in `f f'' - f'^2 = 2 s a f^3` for the untransformed form.
    /// Fixed by direct differentiation; the unit tests re-derive each one.
    pub fn galilean_sign(&self) -> f64 {
        match self {
            TrajectoryForm::LogisticPlus { .. } => -1.0,
            _ => 1.0,
        }
    }

    fn galilean(&self) -> Result<(ScalarFunction, f64)> {
        let (fam, anchor, a) = match *self {
            TrajectoryForm::InverseSquareT { a } => {
                if a <= 0.0 {
                    return Err(Error::Parameter("inverse_square_t requires a > 0".into()));
                }
                (Family::Power { k: 1.0 / a, q: -2.0 }, 1.0, a)
            }
            TrajectoryForm::LogisticPlus { a, b, c } => (Family::LogisticPlus { a, b, c }, 0.0, a),
            TrajectoryForm::LogisticMinus { a, b, c } => (Family::LogisticMinus { a, b, c }, 1.0, a),
            TrajectoryForm::SecSq { a, c } => (Family::SecSq { a, c }, 0.0, a),
            TrajectoryForm::ExpQuadratic { k, q2, q1, q0 } => {
                (Family::ExpQuadratic { k, q2, q1, q0 }, 0.0, q2)
            }
        };
        Ok((ScalarFunction::new(fam, anchor)?, a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryFamilySpec {
    pub d: f64,
    pub form: TrajectoryForm,
}

/// A canonical trajectory with the law it obeys.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub curve: ParamCurve,
    pub profile: ScalarFunction,
    pub law: ParallelLaw,
}

/// `(F_d, f_d)` with `f_d` the d-transform of the chosen parabola form.
pub fn parallel_trajectory(spec: &TrajectoryFamilySpec) -> Result<Trajectory> {
    let (g, a) = spec.form.galilean()?;
    let (f, law) = match spec.form {
        TrajectoryForm::ExpQuadratic { .. } => {
            if spec.d != 0.0 {
                return Err(Error::Parameter("exp_quadratic is the d = 0 (1/y) case only".into()));
            }
            (g, ParallelLaw::new(2.0 * a, 2.0))
        }
        _ => {
            if spec.d == 0.0 {
                return Err(Error::Parameter(
                    "d = 0 is the 1/y law: use the exp_quadratic form".into(),
                ));
            }
            let f = d_transform(&g, spec.d)?;
            (f, ParallelLaw::new(2.0 * spec.form.galilean_sign() * a * spec.d, 2.0 + spec.d))
        }
    };
    let t_ref = f.interior_point(0.5, 1.0);
    Ok(Trajectory { curve: ParamCurve::canonical(f.clone(), t_ref, 0.0)?, profile: f, law })
}

/// Height `y` against physical time for a canonical trajectory, in units
/// where the conserved horizontal speed is 1 (so time equals `x`).
pub fn physical_motion(curve: &ParamCurve, tau: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    if !curve.canonical {
        return Err(Error::Input("physical motion needs a canonical curve".into()));
    }
    let d = curve.domain();
    let mut guess = match (d.lo.is_finite(), d.hi.is_finite()) {
        (true, true) => 0.5 * (d.lo + d.hi),
        (true, false) => d.lo + 1.0,
        (false, true) => d.hi - 1.0,
        (false, false) => 0.0,
    };
    let mut out = Vec::with_capacity(tau.len());
    for &x in tau {
        let t = curve.invert_x(x, guess)?;
        guess = t;
        let (_, y) = curve.jets(t)?;
        out.push((x, x, y.value));
    }
    Ok(out)
}
