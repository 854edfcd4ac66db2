use approx::assert_relative_eq;
use curveforge::diffexpr::expressions;
use curveforge::duality::{ParamCurve, Shape};
use curveforge::error::Error;
use curveforge::trajectories::{
    parallel_trajectory, physical_motion, rectilinear_solve, trajectory_criterion, variational_residual,
    TrajectoryFamilySpec, TrajectoryForm,
};
use curveforge::{Family, ScalarFunction};
use proptest::prelude::*;

fn forms() -> [TrajectoryForm; 4] {
    [
        TrajectoryForm::InverseSquareT { a: 0.8 },
        TrajectoryForm::LogisticPlus { a: 0.6, b: -0.4, c: 1.1 },
        TrajectoryForm::LogisticMinus { a: 0.6, b: -0.4, c: 1.1 },
        TrajectoryForm::SecSq { a: 0.9, c: 0.7 },
    ]
}

fn grid(f: &ScalarFunction, n: usize) -> Vec<f64> {
    let d = f.domain();
    let (lo, hi) = match (d.lo.is_finite(), d.hi.is_finite()) {
        (true, true) => (d.lo + 0.05 * d.width(), d.hi - 0.05 * d.width()),
        (true, false) => (d.lo + 0.2, d.lo + 2.0),
        (false, true) => (d.hi - 2.0, d.hi - 0.2),
        (false, false) => (-1.5, 1.5),
    };
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn inverse_square_t_is_tangent_parabola() {
    let spec = TrajectoryFamilySpec { d: 1.0, form: TrajectoryForm::InverseSquareT { a: 1.0 } };
    let tr = parallel_trajectory(&spec).unwrap();
    assert_eq!(tr.law.b, 2.0);
    assert_eq!(tr.law.alpha, 0.0);
    for t in [0.5, 1.0, 2.0] {
        let f = tr.profile.value(t).unwrap();
        assert_relative_eq!(f, 1.0 / (t * t), max_relative = 1e-14);
        assert_relative_eq!(expressions(&tr.profile, t).unwrap().c, 2.0 * f.powi(3), max_relative = 1e-12);
        // F = -1/t, so y = x'^2 with x' = x + F(t_ref).
        let p = tr.curve.point(t).unwrap();
        let t_ref = 0.5 + tr.profile.domain().lo;
        assert_relative_eq!(p.y, (p.x - 1.0 / t_ref).powi(2), max_relative = 1e-10);
    }
}

#[test]
fn sec_sq_unit_parabola_is_repulsive() {
    let spec = TrajectoryFamilySpec { d: 1.0, form: TrajectoryForm::SecSq { a: 1.0, c: 1.0 } };
    let tr = parallel_trajectory(&spec).unwrap();
    assert!(!tr.law.is_attractive());
    for t in [-1.0, 0.0, 0.4, 1.2] {
        let f = 1.0 / f64::cos(t).powi(2);
        assert_relative_eq!(expressions(&tr.profile, t).unwrap().c, 2.0 * f.powi(3), max_relative = 1e-12);
        let p = tr.curve.point(t).unwrap();
        assert_relative_eq!(p.y, p.x * p.x + 1.0, max_relative = 1e-10);
    }
    let plus = TrajectoryFamilySpec { d: 1.0, form: TrajectoryForm::LogisticPlus { a: 1.0, b: 0.0, c: 1.0 } };
    assert!(parallel_trajectory(&plus).unwrap().law.is_attractive());
}

#[test]
fn galilean_forms_trace_parabolas() {
    for form in forms() {
        let tr = parallel_trajectory(&TrajectoryFamilySpec { d: 1.0, form }).unwrap();
        let pts: Vec<_> = grid(&tr.profile, 12).iter().map(|&t| tr.curve.point(t).unwrap()).collect();
        let (p0, p1, p2) = (pts[0], pts[5], pts[11]);
        let quad = |x: f64| {
            p0.y * (x - p1.x) * (x - p2.x) / ((p0.x - p1.x) * (p0.x - p2.x))
                + p1.y * (x - p0.x) * (x - p2.x) / ((p1.x - p0.x) * (p1.x - p2.x))
                + p2.y * (x - p0.x) * (x - p1.x) / ((p2.x - p0.x) * (p2.x - p1.x))
        };
        for p in &pts {
            assert!((quad(p.x) - p.y).abs() <= 1e-8 * (1.0 + p.y.abs()), "{}", form.name());
        }
    }
}

#[test]
fn transformed_families_obey_their_law() {
    for form in forms() {
        for d in [-2.0, -1.0, 0.5, 1.0, 2.0] {
            let tr = parallel_trajectory(&TrajectoryFamilySpec { d, form }).unwrap();
            assert_eq!(tr.law.beta, 2.0 + d);
            let g = grid(&tr.profile, 50);
            for &t in &g {
                let f = tr.profile.value(t).unwrap();
                let c = expressions(&tr.profile, t).unwrap().c;
                let b = c / f.powf(2.0 + d);
                assert!((b - tr.law.b).abs() <= 1e-9 * tr.law.b.abs(), "{} d={d} t={t}: {b} vs {}", form.name(), tr.law.b);
            }
            let rep = trajectory_criterion(&tr.curve, &g, 1e-6).unwrap();
            assert!(rep.is_power_law, "{} d={d}: dev {}", form.name(), rep.max_deviation);
            assert!((rep.alpha.unwrap() - (d - 1.0)).abs() < 1e-6);
        }
    }
}

#[test]
fn one_over_y_exception() {
    let form = TrajectoryForm::ExpQuadratic { k: 1.0, q2: -0.5, q1: 0.2, q0: 0.0 };
    let tr = parallel_trajectory(&TrajectoryFamilySpec { d: 0.0, form }).unwrap();
    assert_eq!((tr.law.b, tr.law.alpha), (-1.0, -1.0));
    let rep = trajectory_criterion(&tr.curve, &grid(&tr.profile, 30), 1e-6).unwrap();
    assert!((rep.alpha.unwrap() + 1.0).abs() < 1e-6);
    let bad = TrajectoryFamilySpec { d: 1.0, form };
    assert!(matches!(parallel_trajectory(&bad), Err(Error::Parameter(_))));
}

#[test]
fn dido_circle_motion() {
    let f = ScalarFunction::new(Family::MaclaurinCos { p: 1.0, d: 1.0, t0: std::f64::consts::FRAC_PI_2 }, 1.0).unwrap();
    for t in [0.4, 1.0, 2.5] {
        assert_relative_eq!(expressions(&f, t).unwrap().c, -1.0, epsilon = 1e-13);
    }
    let curve = ParamCurve::canonical(f, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
    let h = 1e-3;
    for x in [-0.6, -0.2, 0.0, 0.3, 0.7] {
        let s = physical_motion(&curve, &[x - h, x, x + h]).unwrap();
        let y = s[1].2;
        assert_relative_eq!(y, (1.0 - x * x).sqrt(), max_relative = 1e-12);
        let dd = (s[0].2 - 2.0 * y + s[2].2) / (h * h);
        assert!((dd + y.powi(-3)).abs() <= 1e-5 * y.powi(-3), "{x}: {dd}");
    }
    assert!(matches!(physical_motion(&curve, &[1.5]), Err(Error::Range(_))));
}

#[test]
fn transformed_member_second_difference() {
    let spec = TrajectoryFamilySpec { d: -2.0, form: TrajectoryForm::LogisticPlus { a: 0.6, b: -0.4, c: 1.1 } };
    let tr = parallel_trajectory(&spec).unwrap();
    assert_eq!(tr.law.alpha, -3.0);
    let h = 1e-3;
    for t in grid(&tr.profile, 5) {
        let x = tr.curve.point(t).unwrap().x;
        let s = physical_motion(&tr.curve, &[x - h, x, x + h]).unwrap();
        let y = s[1].2;
        let dd = (s[0].2 - 2.0 * y + s[2].2) / (h * h);
        let want = tr.law.b * y.powf(tr.law.alpha);
        assert!((dd - want).abs() <= 1e-5 * want.abs(), "{t}: {dd} vs {want}");
    }
}

#[test]
fn galilean_fall_as_physical_motion() {
    let w = 2.0 * 2f64.sqrt();
    let f = ScalarFunction::new(Family::LogisticPlus { a: 0.5, b: 0.0, c: w }, 0.0).unwrap();
    let curve = ParamCurve::canonical(f, 0.0, 0.0).unwrap();
    let tau: Vec<f64> = (0..=12).map(|i| 0.1 * i as f64).collect();
    for (t, x, y) in physical_motion(&curve, &tau).unwrap() {
        assert_eq!(t, x);
        assert_relative_eq!(y, 1.0 - 0.5 * t * t, epsilon = 1e-12);
    }
}

#[test]
fn criterion_examples() {
    let g: Vec<f64> = (1..40).map(|i| std::f64::consts::PI * i as f64 / 40.0).collect();
    let semi = ParamCurve::from_shape(Shape::Ellipse { cx: 0.0, cy: 0.0, rx: 1.0, ry: 1.0 });
    let rep = trajectory_criterion(&semi, &g, 1e-6).unwrap();
    assert!(rep.is_power_law);
    assert!((rep.alpha.unwrap() + 3.0).abs() < 1e-6);
    assert!(rep.ratio_samples.iter().all(|r| r.1.abs() < 1e-9));

    let ellipse = ParamCurve::from_shape(Shape::Ellipse { cx: 0.0, cy: 0.0, rx: 2.0, ry: 1.0 });
    assert!((trajectory_criterion(&ellipse, &g, 1e-6).unwrap().alpha.unwrap() + 3.0).abs() < 1e-6);

    let parabola = ParamCurve::from_shape(Shape::Graph { c0: 1.0, c1: 0.0, c2: 1.0 });
    let pg: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
    let rep = trajectory_criterion(&parabola, &pg, 1e-6).unwrap();
    assert!(rep.alpha.unwrap().abs() < 1e-6);
    assert_eq!(rep.skipped, 1);

    for cy in [0.5, 1.1] {
        let c = ParamCurve::from_shape(Shape::Ellipse { cx: 0.0, cy, rx: 1.0, ry: 1.0 });
        let rep = trajectory_criterion(&c, &g, 1e-6).unwrap();
        assert!(!rep.is_power_law && rep.alpha.is_none(), "centre {cy}");
    }
}

#[test]
fn lines_are_degenerate() {
    let pg: Vec<f64> = (0..10).map(|i| i as f64).collect();
    for shape in [Shape::Graph { c0: 1.0, c1: 0.0, c2: 0.0 }, Shape::Graph { c0: 1.0, c1: 2.0, c2: 0.0 }] {
        let c = ParamCurve::from_shape(shape);
        assert!(matches!(trajectory_criterion(&c, &pg, 1e-6), Err(Error::Degenerate(_))));
    }
}

#[test]
fn rectilinear_dido_branch() {
    let tau: Vec<f64> = (0..=100).map(|i| 0.0099 * i as f64).collect();
    let s = rectilinear_solve(-3.0, -1.0, 1.0, 0.0, &tau).unwrap();
    assert!(s.partial.is_none());
    assert!(s.energy_drift < 1e-8, "{}", s.energy_drift);
    for (t, y, v) in &s.samples {
        assert_relative_eq!(*y, (1.0 - t * t).sqrt(), max_relative = 1e-10);
        assert_relative_eq!(*v, -t / (1.0 - t * t).sqrt(), max_relative = 1e-8, epsilon = 1e-12);
    }
    let past = rectilinear_solve(-3.0, -1.0, 1.0, 0.0, &[0.5, 1.2]).unwrap();
    assert_eq!(past.samples.len(), 1);
    assert!(past.partial.unwrap().contains("leaves"));
}

#[test]
fn rectilinear_log_law_by_finite_differences() {
    let (a, h) = (-0.7, 1e-3);
    let centres = [0.2, 0.6, 1.0];
    let tau: Vec<f64> = centres.iter().flat_map(|&c| [c - h, c, c + h]).collect();
    let s = rectilinear_solve(-1.0, a, 1.3, 0.4, &tau).unwrap();
    assert_eq!(s.galilean.form, "exp_quadratic");
    assert!(s.energy_drift < 1e-10);
    for k in 0..centres.len() {
        let (y0, y1, y2) = (s.samples[3 * k].1, s.samples[3 * k + 1].1, s.samples[3 * k + 2].1);
        let dd = (y0 - 2.0 * y1 + y2) / (h * h);
        assert!((dd - a / y1).abs() < 1e-5, "{dd} vs {}", a / y1);
    }
}

#[test]
fn rectilinear_form_selection() {
    let tau = [0.0, 0.1];
    let pick = |alpha: f64, a: f64, y0: f64, v0: f64| rectilinear_solve(alpha, a, y0, v0, &tau).unwrap().galilean.form;
    assert_eq!(pick(0.0, -1.0, 1.0, 0.3), "logistic_plus");
    assert_eq!(pick(0.0, 1.0, 1.0, 0.3), "sec_sq");
    assert_eq!(pick(0.0, 2.0, 1.0, -2.0), "inverse_square_t");
    assert_eq!(pick(0.0, 1.0, 1.0, 2.0), "logistic_minus");
    assert_eq!(pick(0.0, 0.0, 1.0, 2.0), "line");
    assert_eq!(pick(1.0, 1.0, 1.0, 0.0), "sec_sq");
    assert_eq!(pick(1.0, -1.0, 1.0, 0.0), "logistic_plus");
}

#[test]
fn rectilinear_rejects_bad_input() {
    assert!(matches!(rectilinear_solve(0.0, 1.0, -1.0, 0.0, &[0.0]), Err(Error::Parameter(_))));
    assert!(matches!(rectilinear_solve(0.0, 1.0, 1.0, 0.0, &[0.3, 0.1]), Err(Error::Input(_))));
}

#[test]
fn variational_catenary_and_maclaurin() {
    let sec = ScalarFunction::new(Family::MaclaurinCos { p: 1.0, d: -1.0, t0: 0.0 }, 0.0).unwrap();
    let curve = ParamCurve::canonical(sec, 0.0, 0.0).unwrap();
    let g: Vec<f64> = (0..100).map(|i| -1.2 + 2.4 * i as f64 / 99.0).collect();
    let rep = variational_residual(&curve, 1.0, &g).unwrap();
    assert_relative_eq!(rep.mean, 1.0, epsilon = 1e-14);
    assert!(rep.max_deviation < 1e-14);

    let m = ScalarFunction::new(Family::MaclaurinCos { p: 1.0, d: 0.5, t0: 0.0 }, 0.0).unwrap();
    let curve = ParamCurve::canonical(m, 0.0, 0.0).unwrap();
    let g: Vec<f64> = (0..100).map(|i| -2.8 + 5.6 * i as f64 / 99.0).collect();
    assert!(variational_residual(&curve, -0.5, &g).unwrap().max_deviation < 1e-9);
    assert!(variational_residual(&curve, 0.0, &g).unwrap().max_deviation > 1e-3);
}

#[test]
fn parabola_extremal_index_is_plus_half() {
    // y = 1/4 + x^2 as (F, f) with f = sec^2(t/2) / 4.
    let tr = parallel_trajectory(&TrajectoryFamilySpec { d: 1.0, form: TrajectoryForm::SecSq { a: 1.0, c: 0.5 } }).unwrap();
    let g: Vec<f64> = (0..100).map(|i| -2.5 + 5.0 * i as f64 / 99.0).collect();
    assert!(variational_residual(&tr.curve, 0.5, &g).unwrap().max_deviation < 1e-12);
    assert!(variational_residual(&tr.curve, -0.5, &g).unwrap().max_deviation > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn force_coefficient_is_constant(
        which in 0usize..4,
        a in 0.3f64..2.0,
        c in 0.3f64..1.5,
        d in prop_oneof![-2.5f64..-0.2, 0.2f64..2.5],
        s in 0.1f64..0.9,
    ) {
        let form = match which {
            0 => TrajectoryForm::InverseSquareT { a },
            1 => TrajectoryForm::LogisticPlus { a, b: -c, c },
            2 => TrajectoryForm::LogisticMinus { a, b: -c, c },
            _ => TrajectoryForm::SecSq { a, c },
        };
        let tr = parallel_trajectory(&TrajectoryFamilySpec { d, form }).unwrap();
        let g = grid(&tr.profile, 11);
        let t = g[0] + s * (g[10] - g[0]);
        let [f, f1, f2, _, _] = tr.profile.jet(t).unwrap().to_array();
        let c = expressions(&tr.profile, t).unwrap().c;
        // C = f f'' - f'^2 cancels; measure against the size of its terms.
        let scale = (f * f2).abs() + f1 * f1;
        let err = (c - tr.law.b * f.powf(2.0 + d)).abs();
        prop_assert!(err <= 1e-12 * scale, "C {} vs {} (scale {})", c, tr.law.b * f.powf(2.0 + d), scale);
    }
}
