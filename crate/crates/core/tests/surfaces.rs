use curveforge::diffexpr::power_fit;
use curveforge::quadrature::QuadConfig;
use curveforge::surfaces::{revolution_forms, RevolutionSurface};
use curveforge::{Family, ScalarFunction};
use proptest::prelude::*;

fn maclaurin(d: f64) -> ScalarFunction {
    ScalarFunction::new(Family::MaclaurinCos { p: 1.0, d, t0: 0.0 }, 0.0).unwrap()
}

#[test]
fn maclaurin_forms_are_powers_of_the_radius() {
    for d in [0.5, 2.0, -1.0] {
        let s = RevolutionSurface::new(maclaurin(d), 0.0).unwrap();
        let half = std::f64::consts::FRAC_PI_2 / d.abs();
        let vs: Vec<f64> = (0..30).map(|i| -0.8 * half + 1.6 * half * i as f64 / 29.0).collect();
        let forms: Vec<_> = vs.iter().map(|&v| (s.f.value(v).unwrap(), revolution_forms(&s, v).unwrap())).collect();
        let fit = |pick: fn(&curveforge::surfaces::FundamentalForms) -> f64| {
            let pts: Vec<(f64, f64)> = forms.iter().map(|(f, k)| (*f, pick(k))).collect();
            power_fit(&pts, 1e-9).unwrap()
        };
        let cases: [(fn(&curveforge::surfaces::FundamentalForms) -> f64, f64, f64); 4] = [
            (|k| k.e, 1.0, 2.0),
            (|k| k.g, 1.0, 2.0 - 2.0 * d),
            (|k| k.l, 1.0, 1.0 + d),
            (|k| k.n, d, 1.0 - d),
        ];
        for (pick, c, alpha) in cases {
            let r = fit(pick);
            assert!(r.accepted, "d={d}: {r:?}");
            assert!((r.coefficient - c).abs() < 1e-9 && (r.exponent.unwrap() - alpha).abs() < 1e-9, "d={d}: {r:?}");
        }
        assert!(forms.iter().all(|(_, k)| k.f == 0.0 && k.m == 0.0));
    }
}

#[test]
fn meridians_are_geodesics() {
    let s = RevolutionSurface::new(maclaurin(0.5), 0.0).unwrap();
    let (u0, v0) = (0.3, -1.0);
    let g0 = revolution_forms(&s, v0).unwrap().g;
    let arcs: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    let path = s.geodesic([u0, v0], [0.0, 1.0 / g0.sqrt()], &arcs, 1e-11).unwrap();
    let cfg = QuadConfig::default();
    for (arc, row) in arcs.iter().zip(&path) {
        assert_eq!(row[0], u0);
        let len = s.f.integrate_map(v0, row[1], &cfg, |j| j.value.hypot(j.d1)).unwrap();
        assert!((len - arc).abs() < 1e-8, "{arc}: {len}");
    }
}

#[test]
fn clairaut_and_speed_along_oblique_geodesic() {
    let s = RevolutionSurface::new(maclaurin(0.5), 0.0).unwrap();
    let arcs: Vec<f64> = (0..=40).map(|i| 0.05 * i as f64).collect();
    let path = s.geodesic([0.0, 0.2], [0.8, 0.4], &arcs, 1e-11).unwrap();
    let inv = |r: &[f64; 4]| {
        let k = revolution_forms(&s, r[1]).unwrap();
        (k.e * r[2], k.e * r[2] * r[2] + k.g * r[3] * r[3])
    };
    let (c0, e0) = inv(&path[0]);
    for r in &path {
        let (c, e) = inv(r);
        assert!((c - c0).abs() < 1e-8 && (e - e0).abs() < 1e-8);
    }
}

proptest! {
    #[test]
    fn sphere_curvature_is_one(v in -1.5f64..1.5) {
        let s = RevolutionSurface::new(maclaurin(1.0), 0.0).unwrap();
        let k = revolution_forms(&s, v).unwrap();
        prop_assert!((k.gauss - 1.0).abs() < 1e-10);
        prop_assert!(k.f == 0.0 && k.m == 0.0);
    }

    #[test]
    fn gauss_matches_profile_formula(d in prop_oneof![-2.0f64..-0.3, 0.3f64..2.0], s in -0.9f64..0.9) {
        let f = maclaurin(d);
        let v = s * std::f64::consts::FRAC_PI_2 / d.abs();
        let k = revolution_forms(&RevolutionSurface::new(f.clone(), 0.0).unwrap(), v).unwrap();
        let j = f.jet(v).unwrap();
        let want = (j.d1 * j.d1 - j.value * j.d2) / (j.value * j.value + j.d1 * j.d1).powi(2);
        prop_assert!((k.gauss - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}
