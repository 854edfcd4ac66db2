use approx::assert_relative_eq;
use curveforge::diffexpr::{d_transform, solve_quadrature, QuadratureSpec, Rhs};
use curveforge::duality::{
    canonical_parametrization, kasner_dual_law, orbit_constant, param_to_spiral,
    rectification_check, spiral_to_param, Collapse, ParamCurve, Shape,
};
use curveforge::par::linspace;
use curveforge::{Error, Family, ScalarFunction};
use proptest::prelude::*;

#[test]
fn parabola_canonical_form() {
    let c = ParamCurve::from_shape(Shape::Graph { c0: 0.0, c1: 0.0, c2: 1.0 });
    let k = canonical_parametrization(&c, 1.0, -1.0, 0.5, 3.0).unwrap();
    for t in linspace(-1.9, -0.4, 9) {
        let p = k.point(t).unwrap();
        assert_relative_eq!(p.x, -1.0 / t, max_relative = 1e-10);
        assert_relative_eq!(p.y, 1.0 / (t * t), max_relative = 1e-10);
        assert!(k.canonical_defect(t).unwrap() <= 1e-10);
    }
}

#[test]
fn catenary_canonical_form_is_secant() {
    let c = ParamCurve::from_shape(Shape::CoshGraph { a: 1.0, s0: 0.0 });
    let k = canonical_parametrization(&c, 0.0, 0.0, -2.0, 2.0).unwrap();
    let f = k.profile().unwrap();
    for t in linspace(-1.0, 1.0, 9) {
        let j = f.jet(t).unwrap();
        assert_relative_eq!(j.value, 1.0 / t.cos(), max_relative = 1e-10);
        assert_relative_eq!(j.d1, t.tan() / t.cos(), max_relative = 1e-8, epsilon = 1e-12);
    }
}

#[test]
fn circle_arc_is_already_canonical() {
    let c = ParamCurve::from_shape(Shape::Ellipse { cx: 0.0, cy: 0.0, rx: 1.0, ry: 1.0 });
    let k = canonical_parametrization(&c, 1.0, 1.0, 0.1, 3.0).unwrap();
    for t in linspace(0.2, 2.9, 7) {
        assert_relative_eq!(k.point(t).unwrap().y, t.sin(), max_relative = 1e-11);
    }
}

#[test]
fn component_boundary_reported() {
    let c = ParamCurve::from_shape(Shape::Graph { c0: -1.0, c1: 0.0, c2: 1.0 });
    match canonical_parametrization(&c, 2.0, 0.0, 0.0, 3.0) {
        Err(Error::Range(msg)) => assert!(msg.contains("s = 1"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn spiral_round_trip() {
    let f = ScalarFunction::new(Family::ConicFocal { c: 1.0, a: 0.4, b: 0.1 }, 0.0).unwrap();
    let p = spiral_to_param(&f, 0.0).unwrap();
    let c = ParamCurve::from_map(std::sync::Arc::new(Shape::Graph { c0: 0.0, c1: 0.0, c2: 0.0 }));
    drop(c);
    let back = param_to_spiral(&p).unwrap();
    for t in linspace(-2.0, 2.0, 9) {
        assert_relative_eq!(back.f.value(t).unwrap(), f.value(t).unwrap(), max_relative = 1e-14);
    }
    // Through a genuinely numeric reparametrization of the dual.
    let mut pts = Vec::new();
    let shifted = ParamCurve::from_shape(Shape::Graph { c0: 1.0, c1: 0.0, c2: 0.0 });
    let k = canonical_parametrization(&shifted, 0.0, 0.0, -1.0, 1.0).unwrap();
    let g = param_to_spiral(&k).unwrap();
    for t in linspace(-0.9, 0.9, 5) {
        pts.push(g.f.value(t).unwrap());
    }
    assert!(pts.iter().all(|v| (v - 1.0).abs() < 1e-12));
}

#[test]
fn kepler_hooke_numeric() {
    let f = ScalarFunction::new(
        Family::ConicFocal { c: 1.0, a: std::f64::consts::FRAC_1_SQRT_2, b: 0.0 },
        0.0,
    )
    .unwrap();
    assert_relative_eq!(orbit_constant(&f, 1.0, 0.0, 0.3).unwrap(), -0.5, epsilon = 1e-14);
    let law = kasner_dual_law(1.0, 0.0, -0.5, 2.0).unwrap();
    let g = d_transform(&f, 2.0).unwrap();
    for t in linspace(-1.5, 1.5, 31) {
        let j = g.jet(t).unwrap();
        let lhs = j.value + j.d2;
        assert!((lhs - law.law.eval(j.value)).abs() <= 1e-12 * lhs.abs().max(1.0));
        assert!((lhs - 0.5 * j.value.powi(-3)).abs() <= 1e-12 * lhs.abs().max(1.0));
    }
}

#[test]
fn one_over_r_law_duals() {
    // Displayed formula at (c=2, alpha=0, b=1, d=1/2).
    let r = kasner_dual_law(2.0, 0.0, 1.0, 0.5).unwrap();
    assert_eq!(r.law.terms, [(3.0, 0.5), (0.5, 0.0)]);
    // The 1/r law itself: alpha = 1, d = 1/2 gives exponents 1 and 0.
    let s = kasner_dual_law(1.0, 1.0, 1.0, 0.5).unwrap();
    assert_eq!(s.law.terms[0].1, 1.0);
    assert_eq!(s.law.terms[1].1, 0.0);
}

#[test]
fn collapse_flags() {
    assert!(kasner_dual_law(0.0, 0.5, 1.0, 2.0).unwrap().collapses.contains(&Collapse::NoForce));
    assert!(kasner_dual_law(1.0, 0.5, 0.0, 2.0).unwrap().collapses.contains(&Collapse::NoOrbitConstant));
    assert!(kasner_dual_law(1.0, 0.5, 1.0, 1.0).unwrap().collapses.contains(&Collapse::Identity));
}

#[test]
fn rectification_examples() {
    let arch = ScalarFunction::new(Family::Power { k: 1.0, q: -1.0 }, 1.0).unwrap();
    let r = rectification_check(&arch, 1.0, 2.0).unwrap();
    assert!(r.difference <= 1e-8);
    // Parabola y^2 = 2x from y = 1 to 2, as a graph x(y).
    let parabola = curveforge::quadrature::integrate(
        |y: f64| (1.0 + y * y).sqrt(),
        1.0,
        2.0,
        &Default::default(),
    )
    .unwrap();
    assert_relative_eq!(r.len_spiral, parabola, epsilon = 1e-10);

    let circle = ScalarFunction::constant(1.0).unwrap();
    let r = rectification_check(&circle, 0.0, std::f64::consts::PI).unwrap();
    assert_relative_eq!(r.len_spiral, std::f64::consts::PI, epsilon = 1e-12);
    assert_relative_eq!(r.len_diagonal_dual, std::f64::consts::PI, epsilon = 1e-12);
}

#[test]
fn fermat_spiral_matches_cubic_parabola() {
    // r^2 = a theta; diagonal dual is x = (2/3) y^3 / a.
    let a = 2.0f64;
    let f = ScalarFunction::new(Family::Power { k: a.powf(-0.5), q: -0.5 }, 1.0).unwrap();
    let r = rectification_check(&f, 0.5, 3.0).unwrap();
    assert!(r.difference <= 1e-8);
    let (y1, y2) = ((a * 0.5f64).sqrt(), (a * 3.0f64).sqrt());
    let graph = curveforge::quadrature::integrate(
        |y: f64| (1.0 + (2.0 * y * y / a).powi(2)).sqrt(),
        y1,
        y2,
        &Default::default(),
    )
    .unwrap();
    assert_relative_eq!(r.len_diagonal_dual, graph, max_relative = 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn dual_law_matches_numeric_transform(
        c in 0.2f64..2.0,
        alpha in prop_oneof![-2.5f64..-1.3, -0.7f64..2.5],
        f0 in 0.6f64..1.5,
        df0 in 0.05f64..0.6,
        d in prop_oneof![-2.0f64..-0.3, 0.3f64..2.5],
    ) {
        let b = f0 * f0 + df0 * df0 - 2.0 * c * f0.powf(alpha + 1.0) / (alpha + 1.0);
        let phi = Rhs::Powers { terms: vec![(2.0 * c / (alpha + 1.0), alpha + 1.0), (b, 0.0)], log_coef: 0.0 };
        let mut spec = QuadratureSpec::kind_a(phi, 0.0, f0, 1.0, 0.15);
        spec.intervals = 64;
        let sol = match solve_quadrature(&spec) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let law = kasner_dual_law(c, alpha, b, d).unwrap();
        let g = d_transform(&sol, d).unwrap();
        let dom = g.domain();
        for i in 1..8 {
            let t = dom.lo + dom.width() * i as f64 / 8.0;
            let j = g.jet(t).unwrap();
            let lhs = j.value + j.d2;
            let rhs = law.law.eval(j.value);
            let scale = law.law.terms.iter().map(|(k, e)| (k * j.value.powf(*e)).abs()).sum::<f64>().max(lhs.abs());
            prop_assert!((lhs - rhs).abs() <= 1e-6 * scale, "lhs={} rhs={}", lhs, rhs);
        }
    }
}
