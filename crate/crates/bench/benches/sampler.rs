//! Criterion benchmarks for the walk engine and estimators.

use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use stablepot::geometry::DomainSpec;
use stablepot::sampler::{
    estimate_exit_time, run_walk, sample_ball_exit_radius, RngStream, WalkConfig,
};
use stablepot::{Point, StableParams};

fn bench_exit_radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("exit_radius");
    for alpha in [0.5f64, 1.0, 1.5] {
        group.bench_function(format!("alpha_{alpha}"), |b| {
            b.iter_batched_ref(
                || RngStream::new(1, 0),
                |rng| sample_ball_exit_radius(rng, black_box(alpha)),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_walk(c: &mut Criterion) {
    let p = StableParams::new(2, 1.0).unwrap();
    let half_ball = DomainSpec::intersection(vec![
        DomainSpec::unit_ball(2),
        DomainSpec::half_space(Point::new(vec![-1.0, 0.0]), 0.0).unwrap(),
    ]);
    let start = Point::new(vec![0.4, 0.1]);
    let cfg = WalkConfig::default();
    let mut i = 0u64;
    let parent = RngStream::new(7, 0);
    c.bench_function("walk_half_ball_d2_a1", |b| {
        b.iter(|| {
            i += 1;
            run_walk(&p, &half_ball, &start, &cfg, &mut parent.substream(i))
        })
    });
}

fn bench_estimator(c: &mut Criterion) {
    let p = StableParams::new(2, 1.0).unwrap();
    let dom = DomainSpec::unit_ball(2);
    let x = Point::new(vec![0.4, 0.0]);
    let cfg = WalkConfig::default();
    let rng = RngStream::new(11, 0);
    c.bench_function("estimate_exit_time_10k", |b| {
        b.iter(|| estimate_exit_time(&p, &dom, black_box(&x), 10_000, &cfg, &rng).unwrap())
    });
}

criterion_group!(benches, bench_exit_radius, bench_walk, bench_estimator);
criterion_main!(benches);
