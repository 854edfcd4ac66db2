use super::PolarCurve;
use crate::error::{Error, Result};
use crate::funcore::{Family, ScalarFunction};

/// Force laws with closed-form orbits, with their integration constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitLaw {
    /// `f + f'' = c`: `f = c + a cos t + b sin t`.
    InverseSquare { c: f64, a: f64, b: f64 },
    /// `f + f'' = c f`, i.e. `f'' = (c - 1) f`.
    InverseCube { c: f64, a: f64, b: f64 },
    /// `f + f'' = a + b f`, i.e. `f'' = a + (b - 1) f`.
    TwoPower { a: f64, b: f64, k1: f64, k2: f64 },
}

impl OrbitLaw {
    /// Build from `(c, alpha)` plus two integration constants.
    pub fn from_exponent(c: f64, alpha: f64, k1: f64, k2: f64) -> Result<Self> {
        match alpha {
            0.0 => Ok(OrbitLaw::InverseSquare { c, a: k1, b: k2 }),
            1.0 => Ok(OrbitLaw::InverseCube { c, a: k1, b: k2 }),
            _ => Err(Error::Unsupported(format!(
                "no closed-form orbit catalog for alpha = {alpha}"
            ))),
        }
    }
}

/// General solution of the law with the given constants, on the positive
/// component containing `anchor`.
pub fn closed_form_orbit(law: OrbitLaw, anchor: f64) -> Result<PolarCurve> {
    let fam = match law {
        OrbitLaw::InverseSquare { c, a, b } => Family::ConicFocal { c, a, b },
        OrbitLaw::InverseCube { c, a, b } => oscillator(c - 1.0, 0.0, a, b),
        OrbitLaw::TwoPower { a, b, k1, k2 } => {
            if b == 1.0 {
                Family::AffinePoly { c0: k2, c1: k1, c2: 0.5 * a }
            } else {
                oscillator(b - 1.0, a / (1.0 - b), k1, k2)
            }
        }
    };
    Ok(PolarCurve::new(ScalarFunction::new(fam, anchor)?))
}

/// General solution of `f'' = m (f - c0)`.
fn oscillator(m: f64, c0: f64, k1: f64, k2: f64) -> Family {
    if m > 0.0 {
        Family::ExpPair { c0, a: k1, b: k2, k: m.sqrt() }
    } else if m < 0.0 {
        Family::TrigAffine { c0, a: k1, b: k2, k: (-m).sqrt() }
    } else {
        Family::AffinePoly { c0: c0 + k1, c1: k2, c2: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::ns_residual;

    #[test]
    fn cotes_branches_satisfy_law() {
        for c in [0.5, 1.0, 2.0] {
            let orbit = closed_form_orbit(OrbitLaw::InverseCube { c, a: 1.0, b: 0.3 }, 0.1).unwrap();
            for t in [0.0, 0.1, 0.2] {
                assert!(ns_residual(&orbit, c, 1.0, t).unwrap().abs() < 1e-13, "c={c}");
            }
        }
    }

    #[test]
    fn two_power_branches_satisfy_law() {
        for b in [0.5, 1.0, 2.0] {
            let law = OrbitLaw::TwoPower { a: 1.0, b, k1: 1.0, k2: 1.0 };
            let orbit = closed_form_orbit(law, 0.0).unwrap();
            for t in [-0.2, 0.0, 0.3] {
                let j = orbit.f.jet(t).unwrap();
                assert!((j.value + j.d2 - 1.0 - b * j.value).abs() < 1e-13, "b={b}");
            }
        }
    }

    #[test]
    fn unsupported_exponent() {
        assert!(matches!(OrbitLaw::from_exponent(1.0, 2.0, 0.0, 0.0), Err(Error::Unsupported(_))));
    }
}
