use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curveforge::diffexpr::transform_identities;
use curveforge::duality::ParamCurve;
use curveforge::par::{linspace, map_grid, map_grid_seq};
use curveforge::{Family, ScalarFunction};
use std::hint::black_box;

fn identity_sweep(c: &mut Criterion) {
    let f = ScalarFunction::new(Family::ConicFocal { c: 1.0, a: 0.5, b: 0.2 }, 0.0).unwrap();
    let mut group = c.benchmark_group("transform_identities");
    for n in [1_000usize, 20_000] {
        let grid = linspace(-0.4, 0.4, n);
        let work = |&t: &f64| transform_identities(&f, 2.0, t).map(|(l, _)| l.a).unwrap_or(f64::NAN);
        group.bench_with_input(BenchmarkId::new("parallel", n), &grid, |b, g| b.iter(|| black_box(map_grid(g, work))));
        group.bench_with_input(BenchmarkId::new("sequential", n), &grid, |b, g| {
            b.iter(|| black_box(map_grid_seq(g, work)))
        });
    }
    group.finish();
}

fn canonical_sweep(c: &mut Criterion) {
    // Each point inverts the primitive by Newton iteration, so per-point cost dominates.
    let f = ScalarFunction::new(Family::MaclaurinCos { p: 1.0, d: 0.5, t0: 0.0 }, 0.0).unwrap();
    let curve = ParamCurve::canonical(f, 0.0, 0.0).unwrap();
    let grid = linspace(-2.5, 2.5, 2_000);
    let work = |&t: &f64| curve.point(t).map(|p| p.x).unwrap_or(f64::NAN);
    let mut group = c.benchmark_group("canonical_points");
    group.bench_function("parallel", |b| b.iter(|| black_box(map_grid(&grid, work))));
    group.bench_function("sequential", |b| b.iter(|| black_box(map_grid_seq(&grid, work))));
    group.finish();
}

criterion_group!(benches, identity_sweep, canonical_sweep);
criterion_main!(benches);
