//! The expressions `f^2 + f'^2`, `f + f''` and `f f'' - f'^2`, the
//! d-transformation, power-law fits and quadrature solutions.

mod power_fit;
mod quadrature_solve;

pub use power_fit::{power_fit, PowerFit};
pub use quadrature_solve::{rhs_from_b, solve_quadrature, EquationKind, QuadratureSpec, Rhs, Spline};

use crate::error::{Error, Result};
use crate::funcore::{Family, Kind, ScalarFunction};
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpressionTriple {
    /// `f^2 + f'^2`
    pub a: f64,
    /// `f + f''`
    pub b: f64,
    /// `f f'' - f'^2`
    pub c: f64,
}

impl ExpressionTriple {
    pub fn from_jet(f: f64, d1: f64, d2: f64) -> Self {
        ExpressionTriple {
            a: f * f + d1 * d1,
            b: f + d2,
            c: f * d2 - d1 * d1,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

pub fn expressions(f: &ScalarFunction, t: f64) -> Result<ExpressionTriple> {
    let j = f.jet(t)?;
    Ok(ExpressionTriple::from_jet(j.value, j.d1, j.d2))
}

/// `g(t) = f(d t)^(1/d)`. Catalog members closed under the transform map to
/// catalog members; everything else becomes a composite with chain-rule jets.
pub fn d_transform(f: &ScalarFunction, d: f64) -> Result<ScalarFunction> {
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Parameter("d-transform requires finite d != 0".into()));
    }
    if d == 1.0 {
        return Ok(f.clone());
    }
    let domain = f.domain().scaled_by_inverse(d);
    if domain.width() <= 0.0 || domain.width().is_nan() {
        return Err(Error::domain(0.0, domain));
    }
    if let Kind::DTransform { inner, d: d0 } = f.kind() {
        let dd = d0 * d;
        let g = if dd == 1.0 { (**inner).clone() } else { Arc::clone(inner).d_composite(dd)? };
        return g.restricted(domain);
    }
    let closed = f.family().and_then(|fam| match *fam {
        Family::MaclaurinCos { p, d: d1, t0 } => Some(Family::MaclaurinCos {
            p: p.powf(1.0 / d),
            d: d * d1,
            t0: t0 / d,
        }),
        Family::MaclaurinCosh { p, d: d1, t0 } => Some(Family::MaclaurinCosh {
            p: p.powf(1.0 / d),
            d: d * d1,
            t0: t0 / d,
        }),
        Family::Power { k, q } => Some(Family::Power {
            k: k.powf(1.0 / d) * d.abs().powf(q / d),
            q: q / d,
        }),
        Family::ExpAffine { k, m } => Some(Family::ExpAffine { k: k.powf(1.0 / d), m }),
        Family::ExpQuadratic { k, q2, q1, q0 } => Some(Family::ExpQuadratic {
            k: k.powf(1.0 / d),
            q2: q2 * d,
            q1,
            q0: q0 / d,
        }),
        _ => None,
    });
    if let Some(fam) = closed {
        let anchor = f.interior_point(0.5, 1.0) / d;
        if let Ok(g) = ScalarFunction::new(fam, anchor).and_then(|g| g.restricted(domain)) {
            return Ok(g);
        }
    }
    Arc::new(f.clone()).d_composite(d)
}

/// Left and right sides of the three transform identities at `t`:
/// `(g^2 + g'^2, g + g'', g g'' - g'^2)` against the same quantities
/// expressed through `f` at `d t`.
pub fn transform_identities(
    f: &ScalarFunction,
    d: f64,
    t: f64,
) -> Result<(ExpressionTriple, ExpressionTriple)> {
    let g = d_transform(f, d)?;
    let lhs = expressions(&g, t)?;
    let e = expressions(f, d * t)?;
    let fv = f.value(d * t)?;
    let w2 = fv.powf(2.0 / d - 2.0);
    let rhs = ExpressionTriple {
        a: w2 * e.a,
        b: fv.powf(1.0 / d - 2.0) * (e.a + d * e.c),
        c: w2 * d * e.c,
    };
    Ok((lhs, rhs))
}

/// Relative disagreement of two triples, scaled by the larger magnitude per component.
pub fn triple_rel_error(lhs: &ExpressionTriple, rhs: &ExpressionTriple, floor: f64) -> f64 {
    lhs.to_array()
        .iter()
        .zip(rhs.to_array())
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(floor))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mac(p: f64, d: f64) -> ScalarFunction {
        ScalarFunction::new(Family::MaclaurinCos { p, d, t0: 0.0 }, 0.0).unwrap()
    }

    #[test]
    fn cosine_triple() {
        for t in [-1.0, 0.0, 0.4] {
            let e = expressions(&ScalarFunction::cos(), t).unwrap();
            assert_relative_eq!(e.a, 1.0, epsilon = 1e-15);
            assert!(e.b.abs() < 1e-15);
            assert_relative_eq!(e.c, -1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cosh_triple_at_zero() {
        let g = ScalarFunction::new(Family::MaclaurinCosh { p: 1.0, d: 1.0, t0: 0.0 }, 0.0).unwrap();
        let e = expressions(&g, 0.0).unwrap();
        assert_eq!(e.to_array(), [1.0, 2.0, 1.0]);
    }

    #[test]
    fn inverse_square_triple() {
        let f = ScalarFunction::new(Family::Power { k: 1.0, q: -2.0 }, 1.0).unwrap();
        let e = expressions(&f, 1.0).unwrap();
        assert_relative_eq!(e.a, 5.0);
        assert_relative_eq!(e.b, 7.0);
        assert_relative_eq!(e.c, 2.0);
    }

    #[test]
    fn cosine_transforms_to_maclaurin() {
        let g = d_transform(&ScalarFunction::cos(), 3.0).unwrap();
        assert_eq!(g.family(), Some(&Family::MaclaurinCos { p: 1.0, d: 3.0, t0: 0.0 }));
        let h = d_transform(&mac(1.0, 2.0), 3.0).unwrap();
        assert_eq!(h.family(), Some(&Family::MaclaurinCos { p: 1.0, d: 6.0, t0: 0.0 }));
        assert_relative_eq!(h.domain().hi, std::f64::consts::PI / 12.0, max_relative = 1e-15);
    }

    #[test]
    fn identity_transform() {
        let f = mac(1.3, 0.5);
        let g = d_transform(&f, 1.0).unwrap();
        assert_eq!(g.family(), f.family());
        assert_eq!(g.domain(), f.domain());
    }

    #[test]
    fn transform_identities_at_origin() {
        let (l, r) = transform_identities(&ScalarFunction::cos(), 2.0, 0.0).unwrap();
        for (a, b) in l.to_array().iter().zip([1.0, -1.0, -2.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
        assert!(triple_rel_error(&l, &r, 1e-300) < 1e-14);
    }

    #[test]
    fn zero_d_rejected() {
        assert!(matches!(d_transform(&ScalarFunction::cos(), 0.0), Err(Error::Parameter(_))));
    }
}
