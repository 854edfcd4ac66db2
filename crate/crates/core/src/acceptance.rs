//! End-to-end acceptance checks. Each runner exercises the public API at
//! fixed tolerances and reports pass/fail with a one-line detail.

use crate::diffexpr::{
    d_transform, expressions, power_fit, solve_quadrature, transform_identities, triple_rel_error, QuadratureSpec,
    Rhs,
};
use crate::duality::{
    kasner_dual_law, orbit_constant, rectification_check, Collapse, ParamCurve, Shape,
};
use crate::error::{Error, Result};
use crate::funcore::{Family, ScalarFunction};
use crate::oracle::{integrate_force, integrate_force_at, verify_orbit, Claim, ForceField, MotionSample};
use crate::orbits::{detect_power_law, orbit_kinematics, Degenerate, PolarCurve, TOL_CLOSED_FORM};
use crate::par::linspace;
use crate::quadrature::{integrate, QuadConfig};
use crate::surfaces::{revolution_forms, RevolutionSurface};
use crate::trajectories::{
    parallel_trajectory, trajectory_criterion, variational_residual, TrajectoryFamilySpec, TrajectoryForm,
};
use crate::Vec2;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, f64, Check); 11] = [
    (1, "maclaurin power laws", 1.0, maclaurin_power_laws),
    (2, "circle position", 1.0, circle_position),
    (3, "kepler oracle", 5.0, kepler_oracle),
    (4, "transform identities", 1.0, transform_identity_sweep),
    (5, "dual force laws", 2.0, dual_force_laws),
    (6, "parallel trajectories", 10.0, parallel_trajectories),
    (7, "trajectory criterion", 1.0, trajectory_criterion_examples),
    (8, "rectification", 1.0, rectification),
    (9, "variational conservation", 1.0, variational_conservation),
    (10, "surfaces of revolution", 1.0, surfaces),
    (11, "quadrature solvers", 2.0, quadrature_solvers),
];

pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let &(id, name, budget_s, check) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::Input(format!("no acceptance criterion {id}")))?;
    let start = Instant::now();
    let outcome = check();
    let elapsed_s = start.elapsed().as_secs_f64();
    let (ok, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = elapsed_s < budget_s;
    if !in_time {
        detail.push_str(&format!("; over budget ({elapsed_s:.2} s >= {budget_s} s)"));
    }
    Ok(CriterionReport { id, name, passed: ok && in_time, detail, elapsed_s, budget_s })
}

pub fn run_all() -> Vec<CriterionReport> {
    criterion_ids().map(|id| run_criterion(id).expect("listed id")).collect()
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {:<26} ({:.3} s) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed_s,
            self.detail
        )
    }
}

fn family(fam: Family, anchor: f64) -> Result<ScalarFunction> {
    ScalarFunction::new(fam, anchor)
}

/// Grid of `n` points well inside the domain of `f`.
fn inner_grid(f: &ScalarFunction, n: usize, span: f64) -> Vec<f64> {
    let d = f.domain();
    let (lo, hi) = match (d.lo.is_finite(), d.hi.is_finite()) {
        (true, true) => (d.lo + 0.05 * d.width(), d.hi - 0.05 * d.width()),
        (true, false) => (d.lo + 0.1 * span, d.lo + span),
        (false, true) => (d.hi - span, d.hi - 0.1 * span),
        (false, false) => (-span, span),
    };
    linspace(lo, hi, n)
}

fn maclaurin_power_laws() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut ok = true;
    for d in [-2.0, -1.0, -0.5, 0.5, 2.0, 3.0] {
        let f = family(Family::MaclaurinCos { p: 1.0, d, t0: 0.0 }, 0.0)?;
        let grid = inner_grid(&f, 32, 3.0);
        let r = detect_power_law(&PolarCurve::new(f), &grid, TOL_CLOSED_FORM)?;
        let err = r.beta.map_or(f64::INFINITY, |b| (b - (2.0 * d - 3.0)).abs());
        ok &= r.is_power_law && err <= 1e-8;
        worst = worst.max(err);
    }
    Ok((ok, format!("max |beta - (2d - 3)| = {worst:.2e} over 6 values of d")))
}

fn circle_position() -> Result<(bool, String)> {
    let grid = linspace(0.1, 3.0, 32);
    let centred = detect_power_law(&PolarCurve::new(ScalarFunction::constant(1.0)?), &grid, TOL_CLOSED_FORM)?;
    let centred_ok = centred.is_power_law && centred.degenerate == Some(Degenerate::CentredCircle);
    let through = detect_power_law(
        &PolarCurve::new(family(Family::CircleOffset { a: 1.0 }, 0.0)?),
        &linspace(-1.4, 1.4, 32),
        TOL_CLOSED_FORM,
    )?;
    let beta = through.beta.unwrap_or(f64::NAN);
    let through_ok = through.is_power_law && (beta + 5.0).abs() <= 1e-8;
    let mut min_dev = f64::INFINITY;
    let mut rejected = true;
    for a in [0.3, 0.5, 0.7] {
        let r = detect_power_law(&PolarCurve::new(family(Family::CircleOffset { a }, 0.0)?), &grid, TOL_CLOSED_FORM)?;
        rejected &= !r.is_power_law && r.max_quotient_deviation > 1e-3;
        min_dev = min_dev.min(r.max_quotient_deviation);
    }
    Ok((
        centred_ok && through_ok && rejected,
        format!(
            "centred accepted: {centred_ok}; r = 2 cos(theta) beta = {beta:.10}; offsets rejected: {rejected} (min deviation {min_dev:.3e})"
        ),
    ))
}

fn kepler_oracle() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for e in [0.0, 0.5, 0.9] {
        let curve = PolarCurve::new(family(Family::ConicFocal { c: 1.0, a: e, b: 0.0 }, 0.0)?);
        let k = orbit_kinematics(&curve, 0.0)?;
        let init = MotionSample { time: 0.0, position: k.position, velocity: k.velocity };
        let period = 2.0 * PI * (1.0 / (1.0 - e * e)).powf(1.5);
        let run = integrate_force(&ForceField::central(-1.0, -2.0), &init, period, 1e-10)?;
        let chk = verify_orbit(&run.samples, Claim::Polar(&curve))?;
        // f + f'' = 1 for every focal conic with unit latus parameter.
        let h = &chk.hodograph;
        let spread = h.stddev / h.mean;
        ok &= run.partial.is_none() && chk.max_geometric_deviation <= 1e-6 && spread <= 1e-4 && (h.mean - 1.0).abs() <= 1e-4;
        parts.push(format!("e={e}: dev {:.1e}, kh {:.6} (sd/mean {spread:.1e})", chk.max_geometric_deviation, h.mean));
    }
    Ok((ok, parts.join("; ")))
}

fn identity_catalog() -> Result<Vec<ScalarFunction>> {
    [
        (Family::MaclaurinCos { p: 1.0, d: 2.0, t0: 0.0 }, 0.0),
        (Family::MaclaurinCosh { p: 1.0, d: 0.5, t0: 0.0 }, 0.0),
        (Family::ConicFocal { c: 1.0, a: 0.5, b: 0.2 }, 0.0),
        (Family::Power { k: 1.0, q: -2.0 }, 1.0),
        (Family::ExpAffine { k: 1.5, m: 0.4 }, 0.0),
        (Family::ExpQuadratic { k: 1.0, q2: -0.3, q1: 0.1, q0: 0.0 }, 0.0),
        (Family::LogisticPlus { a: 1.0, b: 0.0, c: 1.0 }, 0.0),
        (Family::SecSq { a: 1.0, c: 1.0 }, 0.0),
        (Family::AffinePoly { c0: 1.0, c1: 0.2, c2: 0.3 }, 0.0),
        (Family::TrigAffine { c0: 2.0, a: 0.5, b: 0.3, k: 1.0 }, 0.0),
    ]
    .into_iter()
    .map(|(f, a)| family(f, a))
    .collect()
}

fn transform_identity_sweep() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for f in identity_catalog()? {
        for d in [-2.0, -0.5, 0.5, 2.0, 3.0] {
            let g = d_transform(&f, d)?;
            for t in inner_grid(&g, 20, 1.0) {
                let (l, r) = transform_identities(&f, d, t)?;
                // Relative to the size of the terms, so identically zero
                // expressions are not judged on cancellation noise.
                let j = g.jet(t)?;
                let scale = j.value * j.value + j.d1 * j.d1 + (j.value * j.d2).abs();
                worst = worst.max(triple_rel_error(&l, &r, scale));
                count += 1;
            }
        }
    }
    Ok((worst <= 1e-10, format!("max relative error {worst:.2e} over {count} points")))
}

fn dual_force_laws() -> Result<(bool, String)> {
    // Kepler to Hooke.
    let f = family(Family::ConicFocal { c: 1.0, a: std::f64::consts::FRAC_1_SQRT_2, b: 0.0 }, 0.0)?;
    let b = orbit_constant(&f, 1.0, 0.0, 0.3)?;
    let law = kasner_dual_law(1.0, 0.0, b, 2.0)?;
    let pure = law.law.pure_power();
    let g = d_transform(&f, 2.0)?;
    let mut resid = 0.0f64;
    for t in inner_grid(&g, 41, 1.5) {
        let j = g.jet(t)?;
        resid = resid.max((j.value + j.d2 - 0.5 * j.value.powi(-3)).abs() / (1.0 + j.value.powi(-3)));
    }
    let beta_dual = law.dual_beta.unwrap_or(f64::NAN);
    let product = (law.source_beta + 3.0) * (beta_dual + 3.0);
    let kepler_ok = pure == Some((0.5, -3.0)) && resid <= 1e-6 && (product - 4.0).abs() < 1e-12;
    // c = 0: the line f = cos t maps to a pure b(1-d) g^(1-2d) law.
    let free = kasner_dual_law(0.0, 0.5, 1.0, 2.0)?;
    let g = d_transform(&ScalarFunction::cos(), 2.0)?;
    let mut free_resid = 0.0f64;
    for t in inner_grid(&g, 21, 0.7) {
        let j = g.jet(t)?;
        free_resid = free_resid.max((j.value + j.d2 - free.law.eval(j.value)).abs());
    }
    let free_ok = free.collapses.contains(&Collapse::NoForce) && free.law.pure_power() == Some((-1.0, -3.0)) && free_resid <= 1e-10;
    let log_ok = matches!(kasner_dual_law(1.0, -1.0, 0.0, 2.0), Err(Error::LogarithmicCase));
    Ok((
        kepler_ok && free_ok && log_ok,
        format!(
            "b = {b:.12}, dual g+g'' = 0.5 g^-3 residual {resid:.1e}, (beta+3)(beta'+3) = {product}; c=0 residual {free_resid:.1e}; alpha=-1 rejected: {log_ok}"
        ),
    ))
}

fn trajectory_oracle(curve: &ParamCurve, profile: &ScalarFunction, b: f64, alpha: f64) -> Result<f64> {
    let grid = inner_grid(profile, 11, 1.5);
    let (t_start, t_stop) = (grid[2], grid[8]);
    let (x, y) = curve.jets(t_start)?;
    let x_stop = curve.point(t_stop)?.x;
    let init = MotionSample {
        time: 0.0,
        position: Vec2::new(x.value, y.value),
        velocity: Vec2::new(1.0, y.d1 / y.value),
    };
    let times = linspace(0.0, x_stop - x.value, 201);
    let run = integrate_force_at(&ForceField::parallel(b, alpha), &init, &times, 1e-11)?;
    if let Some(why) = run.partial {
        return Err(Error::Range(why));
    }
    Ok(verify_orbit(&run.samples, Claim::Param(curve))?.max_geometric_deviation)
}

fn parallel_trajectories() -> Result<(bool, String)> {
    let forms = [
        TrajectoryForm::InverseSquareT { a: 0.8 },
        TrajectoryForm::LogisticPlus { a: 0.6, b: -0.4, c: 1.1 },
        TrajectoryForm::LogisticMinus { a: 0.6, b: -0.4, c: 1.1 },
        TrajectoryForm::SecSq { a: 0.9, c: 0.7 },
    ];
    let (mut fit_worst, mut dev_worst) = (0.0f64, 0.0f64);
    let mut ok = true;
    for form in forms {
        for d in [-2.0, 1.0, 2.0] {
            let tr = parallel_trajectory(&TrajectoryFamilySpec { d, form })?;
            let pts: Vec<(f64, f64)> = inner_grid(&tr.profile, 50, 1.5)
                .into_iter()
                .map(|t| Ok((tr.profile.value(t)?, expressions(&tr.profile, t)?.c)))
                .collect::<Result<_>>()?;
            let fit = power_fit(&pts, 1e-9)?;
            let exp_err = fit.exponent.map_or(f64::INFINITY, |e| (e - (2.0 + d)).abs());
            ok &= fit.accepted && exp_err <= 1e-9 && (fit.coefficient - tr.law.b).abs() <= 1e-9 * tr.law.b.abs();
            fit_worst = fit_worst.max(fit.max_residual);
            let dev = trajectory_oracle(&tr.curve, &tr.profile, tr.law.b, tr.law.alpha)?;
            ok &= dev <= 1e-6;
            dev_worst = dev_worst.max(dev);
        }
    }
    // Dido circle: f = sin t obeys f f'' - f'^2 = -1, the y^-3 law.
    let dido = family(Family::MaclaurinCos { p: 1.0, d: 1.0, t0: FRAC_PI_2 }, 1.0)?;
    let curve = ParamCurve::canonical(dido.clone(), FRAC_PI_2, 0.0)?;
    let c_dev = inner_grid(&dido, 20, 1.0)
        .into_iter()
        .map(|t| Ok((expressions(&dido, t)?.c + 1.0).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let dido_dev = trajectory_oracle(&curve, &dido, -1.0, -3.0)?;
    ok &= c_dev <= 1e-9 && dido_dev <= 1e-6;
    Ok((
        ok,
        format!(
            "12 families: max fit residual {fit_worst:.1e}, max oracle deviation {dev_worst:.1e}; Dido circle C+1 {c_dev:.1e}, deviation {dido_dev:.1e}"
        ),
    ))
}

fn trajectory_criterion_examples() -> Result<(bool, String)> {
    let arc = linspace(PI / 40.0, PI * 39.0 / 40.0, 39);
    let semi = trajectory_criterion(&ParamCurve::from_shape(Shape::Ellipse { cx: 0.0, cy: 0.0, rx: 1.0, ry: 1.0 }), &arc, 1e-6)?;
    let parabola = trajectory_criterion(
        &ParamCurve::from_shape(Shape::Graph { c0: 1.0, c1: 0.0, c2: 1.0 }),
        &linspace(-2.0, 2.0, 41),
        1e-6,
    )?;
    let off = trajectory_criterion(&ParamCurve::from_shape(Shape::Ellipse { cx: 0.0, cy: 1.1, rx: 1.0, ry: 1.0 }), &arc, 1e-6)?;
    let a_semi = semi.alpha.unwrap_or(f64::NAN);
    let a_par = parabola.alpha.unwrap_or(f64::NAN);
    let ok = (a_semi + 3.0).abs() <= 1e-6 && a_par.abs() <= 1e-6 && !off.is_power_law;
    Ok((
        ok,
        format!(
            "semicircle alpha {a_semi:.9}, parabola alpha {a_par:.9}, off-axis circle rejected: {} (deviation {:.2e})",
            !off.is_power_law, off.max_deviation
        ),
    ))
}

fn rectification() -> Result<(bool, String)> {
    let arch = family(Family::Power { k: 1.0, q: -1.0 }, 1.0)?;
    let r = rectification_check(&arch, 1.0, 2.0)?;
    let parabola = integrate(|y: f64| (1.0 + y * y).sqrt(), 1.0, 2.0, &QuadConfig::default())?;
    let c = rectification_check(&ScalarFunction::constant(1.0)?, 0.0, PI)?;
    let ok = r.difference <= 1e-8 && (r.len_spiral - parabola).abs() <= 1e-8 && c.difference <= 1e-8;
    Ok((
        ok,
        format!(
            "archimedean {:.12} vs parabola {:.12} (diff {:.1e}); circle diff {:.1e}",
            r.len_spiral, r.len_diagonal_dual, r.difference, c.difference
        ),
    ))
}

fn variational_conservation() -> Result<(bool, String)> {
    let catenary = ParamCurve::canonical(family(Family::MaclaurinCos { p: 1.0, d: -1.0, t0: 0.0 }, 0.0)?, 0.0, 0.0)?;
    let cat = variational_residual(&catenary, 1.0, &linspace(-1.2, 1.2, 100))?.max_deviation;
    // y = 1/4 + x^2, a member of a + (x - d)^2 / (4a).
    let light = parallel_trajectory(&TrajectoryFamilySpec { d: 1.0, form: TrajectoryForm::SecSq { a: 1.0, c: 0.5 } })?;
    let grid = linspace(-2.5, 2.5, 100);
    let par_minus = variational_residual(&light.curve, -0.5, &grid)?.max_deviation;
    let par_plus = variational_residual(&light.curve, 0.5, &grid)?.max_deviation;
    // f^2 + f'^2 = f^alpha with alpha = 2 - 2d; here d = 1/2, r = -1/2.
    let mac = ParamCurve::canonical(family(Family::MaclaurinCos { p: 1.0, d: 0.5, t0: 0.0 }, 0.0)?, 0.0, 0.0)?;
    let m = variational_residual(&mac, -0.5, &linspace(-2.8, 2.8, 100))?.max_deviation;
    let ok = cat <= 1e-9 && par_minus <= 1e-9 && m <= 1e-9;
    Ok((
        ok,
        format!(
            "catenary r=1 {cat:.1e}; parabola r=-1/2 {par_minus:.2e} (r=+1/2 {par_plus:.1e}); maclaurin r=-1/2 {m:.1e}"
        ),
    ))
}

fn surfaces() -> Result<(bool, String)> {
    let cyl = revolution_forms(&RevolutionSurface::new(ScalarFunction::constant(1.5)?, 0.0)?, 0.4)?;
    let sphere = RevolutionSurface::new(family(Family::MaclaurinCos { p: 1.0, d: 1.0, t0: 0.0 }, 0.0)?, 0.0)?;
    let k_err = linspace(-1.4, 1.4, 50)
        .into_iter()
        .map(|v| Ok((revolution_forms(&sphere, v)?.gauss - 1.0).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let d = 0.5;
    let mac = RevolutionSurface::new(family(Family::MaclaurinCos { p: 1.0, d, t0: 0.0 }, 0.0)?, 0.0)?;
    let rows: Vec<(f64, [f64; 4])> = linspace(-2.5, 2.5, 30)
        .into_iter()
        .map(|v| {
            let k = revolution_forms(&mac, v)?;
            Ok((mac.f.value(v)?, [k.e, k.g, k.l, k.n]))
        })
        .collect::<Result<_>>()?;
    let mut fits_ok = true;
    let mut exps = Vec::new();
    for i in 0..4 {
        let pts: Vec<(f64, f64)> = rows.iter().map(|(f, k)| (*f, k[i])).collect();
        let fit = power_fit(&pts, 1e-9)?;
        fits_ok &= fit.accepted;
        exps.push(fit.exponent.unwrap_or(f64::NAN));
    }
    let ok = cyl.gauss.abs() <= 1e-10 && k_err <= 1e-10 && fits_ok;
    Ok((
        ok,
        format!(
            "cylinder K {:.1e}; sphere max |K-1| {k_err:.1e}; maclaurin d=1/2 exponents E,G,L,N = {:.6}, {:.6}, {:.6}, {:.6}",
            cyl.gauss, exps[0], exps[1], exps[2], exps[3]
        ),
    ))
}

fn quadrature_solvers() -> Result<(bool, String)> {
    let mut spec = QuadratureSpec::kind_a(Rhs::power(1.0, -2.0), 0.0, 1.0, -1.0, 0.7);
    spec.allow_turning_start = true;
    let a = solve_quadrature(&spec)?;
    let exact = family(Family::MaclaurinCos { p: 1.0, d: 2.0, t0: 0.0 }, 0.0)?;
    let mut worst_a = 0.0f64;
    for i in 0..=700 {
        let t = 0.7 * i as f64 / 700.0;
        worst_a = worst_a.max((a.value(t)? - exact.value(t)?).abs());
    }
    let c = solve_quadrature(&QuadratureSpec::kind_c(Rhs::power(2.0, 3.0), 1.0, 1.0, -2.0, 3.0))?;
    let mut worst_c = 0.0f64;
    for i in 0..=200 {
        let t = 1.0 + 0.01 * i as f64;
        worst_c = worst_c.max((c.value(t)? - 1.0 / (t * t)).abs());
    }
    Ok((
        worst_a <= 1e-8 && worst_c <= 1e-8,
        format!("kind A vs (cos 2t)^(1/2): {worst_a:.1e}; kind C vs 1/t^2: {worst_c:.1e}"),
    ))
}
