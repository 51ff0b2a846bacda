//! Criterion benchmarks for the closed-form kernel evaluations.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use stablepot::geometry::BallSpec;
use stablepot::kernels;
use stablepot::{Point, StableParams};

fn bench_ball_poisson(c: &mut Criterion) {
    let p = StableParams::new(2, 1.0).unwrap();
    let ball = BallSpec::unit(2);
    let x = Point::new(vec![0.3, -0.1]);
    let y = Point::new(vec![1.7, 0.6]);
    c.bench_function("ball_poisson_d2", |b| {
        b.iter(|| kernels::ball_poisson(&p, &ball, black_box(&x), black_box(&y)).unwrap())
    });
}

fn bench_ball_green(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball_green");
    // α < d: incomplete-beta closed form.
    let p2 = StableParams::new(2, 1.0).unwrap();
    let ball2 = BallSpec::unit(2);
    let x2 = Point::new(vec![0.3, -0.1]);
    let v2 = Point::new(vec![-0.2, 0.4]);
    group.bench_function("beta_path_d2_a1", |b| {
        b.iter(|| kernels::ball_green(&p2, &ball2, black_box(&x2), black_box(&v2)))
    });
    // d = α = 1: asinh closed form.
    let p11 = StableParams::new(1, 1.0).unwrap();
    let ball1 = BallSpec::unit(1);
    let x1 = Point::new(vec![0.2]);
    let v1 = Point::new(vec![-0.5]);
    group.bench_function("asinh_path_d1_a1", |b| {
        b.iter(|| kernels::ball_green(&p11, &ball1, black_box(&x1), black_box(&v1)))
    });
    // d = 1 < α: adaptive quadrature path.
    let p15 = StableParams::new(1, 1.5).unwrap();
    group.bench_function("quad_path_d1_a15", |b| {
        b.iter(|| kernels::ball_green(&p15, &ball1, black_box(&x1), black_box(&v1)))
    });
    group.finish();
}

fn bench_constants(c: &mut Criterion) {
    c.bench_function("riesz_const", |b| {
        b.iter(|| kernels::riesz_const(black_box(3), black_box(-1.3)).unwrap())
    });
    c.bench_function("stable_params_new", |b| {
        b.iter(|| StableParams::new(black_box(3), black_box(1.3)).unwrap())
    });
}

criterion_group!(benches, bench_ball_poisson, bench_ball_green, bench_constants);
criterion_main!(benches);
