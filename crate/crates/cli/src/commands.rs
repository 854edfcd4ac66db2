use crate::config::{Command, CurveKind, Format, GridSpec, RunConfig};
use crate::csvio::{self, Table};
use crate::CliError;
use curveforge::acceptance::{run_all, CriterionReport};
use curveforge::diffexpr::{d_transform, expressions, power_fit};
use curveforge::duality::{quadrality, rectification_check, ParamCurve, Rectification};
use curveforge::oracle::{
    fd_derivative_samples, integrate_force, verify_orbit, Claim, ForceField, MotionSample, OrbitCheck,
};
use curveforge::orbits::{
    area_time_map, curvatures, detect_power_law, detect_power_law_samples, orbit_kinematics, PolarCurve,
    PowerLawReport, TOL_CLOSED_FORM, TOL_SAMPLED,
};
use curveforge::trajectories::{trajectory_criterion, trajectory_criterion_samples, ParallelReport};
use curveforge::{ScalarFunction, Vec2};
use serde::Serialize;
use std::path::Path;

const DEFAULT_COUNT: usize = 201;
/// Fewest samples for which the fourth-order stencil has two Richardson levels.
pub const MIN_SAMPLES: usize = 9;
/// Anchors tried in turn when none is given.
const ANCHORS: [f64; 4] = [0.0, 1.0, -1.0, 0.5];

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    match cmd {
        Command::Classify => classify(cfg),
        Command::Emit => emit(cfg),
        Command::Dual => dual(cfg),
        Command::Simulate => simulate(cfg),
        Command::Rectify => rectify(cfg),
        Command::Verify => verify(cfg),
    }
}

fn context(what: &'static str) -> impl Fn(curveforge::Error) -> CliError {
    move |e| CliError::Core(what, e)
}

fn function(cfg: &RunConfig) -> Result<ScalarFunction, CliError> {
    let tag = cfg.family.as_deref().ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let params: Vec<(&str, f64)> = cfg.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let f = match cfg.anchor {
        Some(a) => ScalarFunction::from_tag(tag, &params, a),
        None => {
            let mut last = None;
            for a in ANCHORS {
                match ScalarFunction::from_tag(tag, &params, a) {
                    Ok(f) => return finish(cfg, f),
                    Err(e) => last = Some(e),
                }
            }
            Err(last.expect("at least one anchor tried"))
        }
    }
    .map_err(context("family"))?;
    finish(cfg, f)
}

fn finish(cfg: &RunConfig, f: ScalarFunction) -> Result<ScalarFunction, CliError> {
    match cfg.transform_d {
        Some(d) => d_transform(&f, d).map_err(context("transform")),
        None => Ok(f),
    }
}

fn grid(cfg: &RunConfig, f: &ScalarFunction) -> Vec<f64> {
    match cfg.grid {
        Some(g) => g.points(DEFAULT_COUNT),
        None => {
            let n = DEFAULT_COUNT;
            (0..n).map(|i| f.interior_point(0.025 + 0.95 * i as f64 / (n - 1) as f64, std::f64::consts::PI)).collect()
        }
    }
}

fn canonical(f: &ScalarFunction, grid: &[f64]) -> Result<ParamCurve, CliError> {
    ParamCurve::canonical(f.clone(), grid[0], 0.0).map_err(context("canonical"))
}

fn write_table(table: &Table, cfg: &RunConfig, path: Option<&Path>) -> Result<(), CliError> {
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => csvio::to_json(&table.to_json_value())?,
    };
    csvio::emit(&text, path)
}

fn json_only(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    if cfg.format == Some(Format::Csv) {
        return Err(CliError::Usage(format!("{what} writes JSON only")));
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum Classification {
    Central(PowerLawReport),
    Parallel(ParallelReport),
}

#[derive(Serialize)]
struct ClassifyOutput {
    kind: CurveKind,
    source: String,
    points: usize,
    #[serde(flatten)]
    report: Classification,
}

fn classify(cfg: &RunConfig) -> Result<(), CliError> {
    json_only(cfg, "classify")?;
    let (source, points, report) = match &cfg.input {
        Some(path) => {
            let table = csvio::read_samples(path)?;
            let report = classify_samples(&table, cfg.kind, cfg.tol.unwrap_or(TOL_SAMPLED))?;
            (path.display().to_string(), table.rows.len(), report)
        }
        None => {
            let f = function(cfg)?;
            let g = grid(cfg, &f);
            let tol = cfg.tol.unwrap_or(TOL_CLOSED_FORM);
            let report = match cfg.kind {
                CurveKind::Central => Classification::Central(
                    detect_power_law(&PolarCurve::new(f.clone()), &g, tol).map_err(context("classify"))?,
                ),
                CurveKind::Parallel => Classification::Parallel(
                    trajectory_criterion(&canonical(&f, &g)?, &g, tol).map_err(context("classify"))?,
                ),
            };
            (f.to_string(), g.len(), report)
        }
    };
    let out = ClassifyOutput { kind: cfg.kind, source, points, report };
    csvio::emit(&csvio::to_json(&out)?, cfg.out.as_deref())
}

/// Jets `[v, v', v'', v''']` at every node where each derivative has at
/// least two Richardson levels.
fn sample_jets(s: &[f64], v: &[f64]) -> Vec<(f64, [f64; 4])> {
    let series: Vec<(f64, f64)> = s.iter().copied().zip(v.iter().copied()).collect();
    s.iter()
        .enumerate()
        .filter_map(|(i, &t)| {
            let mut jet = [v[i], 0.0, 0.0, 0.0];
            for (k, slot) in jet.iter_mut().enumerate().skip(1) {
                let e = fd_derivative_samples(&series, t, k).ok()?;
                if !e.error.is_finite() {
                    return None;
                }
                *slot = e.value;
            }
            Some((t, jet))
        })
        .collect()
}

fn classify_samples(table: &Table, kind: CurveKind, tol: f64) -> Result<Classification, CliError> {
    if table.rows.len() < MIN_SAMPLES {
        return Err(CliError::Usage(format!(
            "{} samples; sampled classification needs at least {MIN_SAMPLES}",
            table.rows.len()
        )));
    }
    let width = table.columns.len();
    let col = |j: usize| -> Vec<f64> { table.rows.iter().map(|r| r[j]).collect() };
    let s = col(0);
    match kind {
        CurveKind::Central => {
            let f: Vec<f64> = match width {
                2 => col(1).iter().map(|r| 1.0 / r).collect(),
                w if w >= 3 => table.rows.iter().map(|r| 1.0 / r[1].hypot(r[2])).collect(),
                _ => return Err(CliError::Usage("central samples need columns theta,r or t,x,y".into())),
            };
            let jets = sample_jets(&s, &f);
            let report = detect_power_law_samples(&jets, tol).map_err(context("classify"))?;
            Ok(Classification::Central(report))
        }
        CurveKind::Parallel => {
            if width < 3 {
                return Err(CliError::Usage("parallel samples need columns s,x,y".into()));
            }
            let (xs, ys) = (sample_jets(&s, &col(1)), sample_jets(&s, &col(2)));
            let pts: Vec<(f64, [f64; 4], [f64; 4])> = xs.into_iter().zip(ys).map(|((t, x), (_, y))| (t, x, y)).collect();
            let report = trajectory_criterion_samples(&pts, tol).map_err(context("classify"))?;
            Ok(Classification::Parallel(report))
        }
    }
}

fn emit(cfg: &RunConfig) -> Result<(), CliError> {
    let f = function(cfg)?;
    let g = grid(cfg, &f);
    let table = match cfg.kind {
        CurveKind::Central => {
            let curve = PolarCurve::new(f);
            let mut t = Table::new(vec!["t", "x", "y", "kappa", "kappa_aff", "kappa_h"]);
            for &th in &g {
                let r = curve.radius(th).map_err(context("emit"))?;
                let k = curvatures(&curve, th).map_err(context("emit"))?;
                let p = Vec2::polar(r, th);
                t.push(vec![th, p.x, p.y, k.kappa, k.kappa_aff, k.kappa_h]);
            }
            t
        }
        CurveKind::Parallel => {
            let curve = canonical(&f, &g)?;
            let mut t = Table::new(vec!["t", "x", "y", "exprA", "exprB", "exprC"]);
            for &s in &g {
                let p = curve.point(s).map_err(context("emit"))?;
                let e = expressions(&f, s).map_err(context("emit"))?;
                t.push(vec![s, p.x, p.y, e.a, e.b, e.c]);
            }
            t
        }
    };
    write_table(&table, cfg, cfg.out.as_deref())
}

fn dual(cfg: &RunConfig) -> Result<(), CliError> {
    let f = function(cfg)?;
    let g = grid(cfg, &f);
    let q = quadrality(&f, g[0]).map_err(context("dual"))?;
    let polar = |curve: &PolarCurve| -> Result<Table, CliError> {
        let mut t = Table::new(vec!["t", "x", "y"]);
        for &th in &g {
            let p = Vec2::polar(curve.radius(th).map_err(context("dual"))?, th);
            t.push(vec![th, p.x, p.y]);
        }
        Ok(t)
    };
    let param = |curve: &ParamCurve| -> Result<Table, CliError> {
        let mut t = Table::new(vec!["t", "x", "y"]);
        for &s in &g {
            let p = curve.point(s).map_err(context("dual"))?;
            t.push(vec![s, p.x, p.y]);
        }
        Ok(t)
    };
    let tables = [
        ("spiral", polar(&q.spiral)?),
        ("dual", param(&q.dual)?),
        ("inverse_spiral", polar(&q.inverse_spiral)?),
        ("diagonal", param(&q.diagonal)?),
    ];
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> =
                tables.iter().map(|(n, t)| (n.to_string(), t.to_json_value())).collect();
            csvio::emit(&csvio::to_json(&obj)?, cfg.out.as_deref())
        }
        Format::Csv => {
            let dir = cfg
                .out
                .as_deref()
                .ok_or_else(|| CliError::Usage("dual writes four CSV files; give --out DIR".into()))?;
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for (name, t) in &tables {
                csvio::emit(&t.to_csv(), Some(&dir.join(format!("{name}.csv"))))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SimulateOutput {
    field: ForceField,
    init: MotionSample,
    t_end: f64,
    tol: f64,
    steps: usize,
    samples: usize,
    partial: Option<String>,
    energy_drift: f64,
    momentum_drift: f64,
    /// Largest distance from the claimed orbit, when there is one.
    deviation: Option<f64>,
    verification: Option<OrbitCheck>,
}

enum Claimed {
    None,
    Polar(PolarCurve),
    Param(ParamCurve),
}

/// Field, initial state, duration and claimed orbit for a family.
fn family_motion(cfg: &RunConfig) -> Result<(ForceField, MotionSample, f64, Claimed), CliError> {
    let f = function(cfg)?;
    let g = grid(cfg, &f);
    let (t0, t1) = (g[0], g[g.len() - 1]);
    let given = cfg.coefficient.zip(cfg.exponent);
    match cfg.kind {
        CurveKind::Central => {
            let curve = PolarCurve::new(f.clone());
            let field = match given {
                Some((c, e)) => ForceField::central(c, e),
                None => {
                    let r = detect_power_law(&curve, &g, TOL_CLOSED_FORM).map_err(context("simulate"))?;
                    match (r.is_power_law, r.c, r.beta) {
                        (true, Some(c), Some(beta)) => ForceField::central(-c, beta),
                        (true, Some(0.0), None) => ForceField::central(0.0, -2.0),
                        _ => {
                            return Err(CliError::Usage(
                                "orbit has no unique power law; give --coefficient and --exponent".into(),
                            ))
                        }
                    }
                }
            };
            let k = orbit_kinematics(&curve, t0).map_err(context("simulate"))?;
            let t_end = match cfg.t_end {
                Some(t) => t,
                None => area_time_map(&curve, t0, t1).map_err(context("simulate"))?,
            };
            let init = MotionSample { time: 0.0, position: k.position, velocity: k.velocity };
            Ok((field, init, t_end, Claimed::Polar(curve)))
        }
        CurveKind::Parallel => {
            let curve = canonical(&f, &g)?;
            let field = match given {
                Some((c, e)) => ForceField::parallel(c, e),
                None => {
                    let pts = g
                        .iter()
                        .map(|&t| Ok((f.value(t)?, expressions(&f, t)?.c)))
                        .collect::<curveforge::Result<Vec<_>>>()
                        .map_err(context("simulate"))?;
                    let fit = power_fit(&pts, 1e-8).map_err(context("simulate"))?;
                    match (fit.accepted, fit.exponent) {
                        (true, Some(beta)) => ForceField::parallel(fit.coefficient, beta - 3.0),
                        _ => {
                            return Err(CliError::Usage(
                                "profile has no power-law parallel force; give --coefficient and --exponent".into(),
                            ))
                        }
                    }
                }
            };
            let (x, y) = curve.jets(t0).map_err(context("simulate"))?;
            let x_end = curve.point(t1).map_err(context("simulate"))?.x;
            let init = MotionSample {
                time: 0.0,
                position: Vec2::new(x.value, y.value),
                velocity: Vec2::new(1.0, y.d1 / y.value),
            };
            Ok((field, init, cfg.t_end.unwrap_or(x_end - x.value), Claimed::Param(curve)))
        }
    }
}

fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let (field, init, t_end, claim) = if cfg.family.is_some() {
        family_motion(cfg)?
    } else {
        let missing = |what: &str| CliError::Usage(format!("simulate without --family needs --{what}"));
        let kind = cfg.field.unwrap_or(cfg.kind);
        let (c, e) = (cfg.coefficient.ok_or_else(|| missing("coefficient"))?, cfg.exponent.ok_or_else(|| missing("exponent"))?);
        let field = match kind {
            CurveKind::Central => ForceField::central(c, e),
            CurveKind::Parallel => ForceField::parallel(c, e),
        };
        let [x, y, vx, vy] = cfg.init.ok_or_else(|| missing("init"))?;
        let init = MotionSample { time: 0.0, position: Vec2::new(x, y), velocity: Vec2::new(vx, vy) };
        (field, init, cfg.t_end.ok_or_else(|| missing("t-end"))?, Claimed::None)
    };
    let tol = cfg.tol.unwrap_or(1e-10);
    let run = integrate_force(&field, &init, t_end, tol).map_err(context("simulate"))?;
    let verification = match &claim {
        Claimed::None => None,
        Claimed::Polar(c) => Some(verify_orbit(&run.samples, Claim::Polar(c)).map_err(context("verify_orbit"))?),
        Claimed::Param(c) => Some(verify_orbit(&run.samples, Claim::Param(c)).map_err(context("verify_orbit"))?),
    };
    if let Some(path) = cfg.out.as_deref() {
        let mut t = Table::new(vec!["time", "x", "y", "vx", "vy"]);
        for s in &run.samples {
            t.push(vec![s.time, s.position.x, s.position.y, s.velocity.x, s.velocity.y]);
        }
        write_table(&t, cfg, Some(path))?;
    }
    let out = SimulateOutput {
        field,
        init,
        t_end,
        tol,
        steps: run.steps,
        samples: run.samples.len(),
        partial: run.partial,
        energy_drift: run.energy_drift,
        momentum_drift: run.momentum_drift,
        deviation: verification.as_ref().map(|v| v.max_geometric_deviation),
        verification,
    };
    csvio::emit(&csvio::to_json(&out)?, None)
}

#[derive(Serialize)]
struct RectifyOutput {
    function: String,
    t1: f64,
    t2: f64,
    #[serde(flatten)]
    lengths: Rectification,
}

fn rectify(cfg: &RunConfig) -> Result<(), CliError> {
    json_only(cfg, "rectify")?;
    let f = function(cfg)?;
    let GridSpec { start, end, .. } =
        cfg.grid.ok_or_else(|| CliError::Usage("rectify needs the interval as --grid a:b".into()))?;
    let lengths = rectification_check(&f, start, end).map_err(context("rectify"))?;
    let out = RectifyOutput { function: f.to_string(), t1: start, t2: end, lengths };
    csvio::emit(&csvio::to_json(&out)?, cfg.out.as_deref())
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: usize,
    failed: usize,
    criteria: Vec<CriterionReport>,
}

fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    json_only(cfg, "verify")?;
    let criteria = run_all();
    for r in &criteria {
        eprintln!("{r}");
    }
    let passed = criteria.iter().filter(|r| r.passed).count();
    let out = VerifyOutput { passed, failed: criteria.len() - passed, criteria };
    csvio::emit(&csvio::to_json(&out)?, cfg.out.as_deref())?;
    if out.failed > 0 {
        return Err(CliError::Failed(format!("{} of {} criteria failed", out.failed, passed + out.failed)));
    }
    Ok(())
}
