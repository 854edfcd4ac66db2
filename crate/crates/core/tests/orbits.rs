use approx::assert_relative_eq;
use curveforge::orbits::{
    closed_form_orbit, curvatures, detect_power_law, ns_residual, wedge_affine_curvature,
    OrbitLaw, PolarCurve, TOL_CLOSED_FORM,
};
use curveforge::par::linspace;
use curveforge::{Family, Jet, ScalarFunction, Vec2};

fn curve(fam: Family, anchor: f64) -> PolarCurve {
    PolarCurve::new(ScalarFunction::new(fam, anchor).unwrap())
}

fn window(c: &PolarCurve, n: usize) -> Vec<f64> {
    let d = c.f.domain();
    let (lo, hi) = (d.lo.max(-3.0), d.hi.min(3.0));
    let m = 0.05 * (hi - lo);
    linspace(lo + m, hi - m, n)
}

#[test]
fn ellipse_is_inverse_square() {
    let c = curve(Family::ConicFocal { c: 1.0, a: 0.5, b: 0.0 }, 0.0);
    let r = detect_power_law(&c, &linspace(0.1, 3.0, 32), TOL_CLOSED_FORM).unwrap();
    assert!(r.is_power_law);
    assert!(r.alpha.unwrap().abs() < 1e-10);
    assert_relative_eq!(r.beta.unwrap(), -2.0, epsilon = 1e-10);
    assert_relative_eq!(r.c.unwrap(), 1.0, epsilon = 1e-10);
}

#[test]
fn maclaurin_exponents() {
    for d in [-2.0, -1.0, -0.5, 0.5, 2.0, 3.0] {
        let c = curve(Family::MaclaurinCos { p: 1.0, d, t0: 0.0 }, 0.0);
        let r = detect_power_law(&c, &window(&c, 32), TOL_CLOSED_FORM).unwrap();
        assert!(r.is_power_law, "d={d} dev={}", r.max_quotient_deviation);
        assert!((r.beta.unwrap() - (2.0 * d - 3.0)).abs() < 1e-8, "d={d}");
    }
    // d = 1 is the straight line: zero force.
    let line = curve(Family::MaclaurinCos { p: 1.0, d: 1.0, t0: 0.0 }, 0.0);
    let r = detect_power_law(&line, &window(&line, 32), TOL_CLOSED_FORM).unwrap();
    assert!(r.is_power_law && r.c == Some(0.0));
}

#[test]
fn off_centre_circles_rejected() {
    for a in [0.3, 0.5, 0.7] {
        let c = curve(Family::CircleOffset { a }, 0.0);
        let r = detect_power_law(&c, &linspace(0.1, 3.0, 32), TOL_CLOSED_FORM).unwrap();
        assert!(!r.is_power_law);
        assert!(r.max_quotient_deviation > 1e-3, "a={a} dev={}", r.max_quotient_deviation);
    }
    let c = PolarCurve::new(
        ScalarFunction::new(Family::CircleOffset { a: 2.0 }, 0.0).unwrap().scaled(1.5).unwrap(),
    );
    let r = detect_power_law(&c, &linspace(0.02, 0.5, 32), TOL_CLOSED_FORM).unwrap();
    assert!(!r.is_power_law);
}

#[test]
fn circle_through_centre_is_inverse_fifth() {
    let c = curve(Family::CircleOffset { a: 1.0 }, 0.0);
    let r = detect_power_law(&c, &linspace(-1.4, 1.4, 32), TOL_CLOSED_FORM).unwrap();
    assert!(r.is_power_law);
    assert_relative_eq!(r.beta.unwrap(), -5.0, epsilon = 1e-8);
}

#[test]
fn cotes_epispiral_example_is_inverse_cube() {
    let c = closed_form_orbit(OrbitLaw::InverseCube { c: 2.0, a: 1.0, b: 0.0 }, 0.0).unwrap();
    let r = detect_power_law(&c, &linspace(-1.0, 1.0, 32), TOL_CLOSED_FORM).unwrap();
    assert_relative_eq!(r.beta.unwrap(), -3.0, epsilon = 1e-9);
}

#[test]
fn two_power_example() {
    let c = closed_form_orbit(OrbitLaw::TwoPower { a: 1.0, b: 2.0, k1: 1.0, k2: 1.0 }, 0.0).unwrap();
    for t in linspace(-1.0, 1.0, 11) {
        let j = c.f.jet(t).unwrap();
        assert!((j.value + j.d2 - (1.0 + 2.0 * j.value)).abs() < 1e-13);
    }
    assert!(ns_residual(&c, 1.0, 0.0, 0.3).unwrap().abs() > 0.1);
}

#[test]
fn maclaurin_affine_curvature_is_power_of_distance() {
    for d in [-1.0, 0.5, 2.0] {
        let c = curve(Family::MaclaurinCos { p: 1.0, d, t0: 0.0 }, 0.0);
        for t in window(&c, 7) {
            let f = c.f.value(t).unwrap();
            let k = curvatures(&c, t).unwrap();
            assert_relative_eq!(k.kappa_aff, -(d - 1.0) * f.powf(4.0 - 2.0 * d), max_relative = 1e-12, epsilon = 1e-14);
        }
    }
}

#[test]
fn curvature_relation_chain() {
    let c = curve(Family::ConicFocal { c: 1.0, a: 0.6, b: 0.2 }, 0.0);
    for t in linspace(0.0, 6.0, 40) {
        let j = c.f.jet(t).unwrap();
        let k = curvatures(&c, t).unwrap();
        let force = j.value * j.value * (j.value + j.d2);
        assert_relative_eq!(k.kappa_aff * k.kappa_h, j.value.powi(3), max_relative = 1e-10);
        assert_relative_eq!(k.kappa_h * force, j.value.powi(2), max_relative = 1e-10);
        assert_relative_eq!(force / k.kappa_aff, 1.0 / j.value, max_relative = 1e-10);
        assert_relative_eq!(k.kappa_h, 1.0, max_relative = 1e-10);
    }
}

#[test]
fn wedge_formula_is_reparametrization_invariant() {
    let c = curve(Family::MaclaurinCos { p: 1.3, d: 0.5, t0: 0.2 }, 0.2);
    for s in linspace(-0.5, 0.5, 11) {
        // theta = s + 0.3 s^3 + 0.2
        let th = Jet::new(s + 0.3 * s.powi(3) + 0.2, 1.0 + 0.9 * s * s, 1.8 * s, 1.8, 0.0);
        let (xj, yj) = c.position_jets(th.value).unwrap();
        let x = th.compose(xj.to_array());
        let y = th.compose(yj.to_array());
        let k = wedge_affine_curvature(
            Vec2::new(x.value, y.value),
            Vec2::new(x.d1, y.d1),
            Vec2::new(x.d2, y.d2),
        );
        let expect = curvatures(&c, th.value).unwrap().kappa_aff;
        assert_relative_eq!(k, expect, max_relative = 1e-8);
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn maclaurin_orbits_obey_their_power_law(d in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0], p in 0.5f64..2.0) {
            let c = curve(Family::MaclaurinCos { p, d, t0: 0.0 }, 0.0);
            let r = detect_power_law(&c, &window(&c, 24), TOL_CLOSED_FORM).unwrap();
            prop_assert!(r.is_power_law, "{r:?}");
            let (alpha, beta) = (r.alpha.unwrap(), r.beta.unwrap());
            prop_assert!((beta + 2.0 + alpha).abs() < 1e-12);
            prop_assert!((beta - (2.0 * d - 3.0)).abs() <= 1e-8 * (1.0 + beta.abs()), "{beta} vs d={d}");
            prop_assert!(r.max_quotient_deviation <= TOL_CLOSED_FORM);
        }
    }
}
