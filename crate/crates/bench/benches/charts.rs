use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use explab::gallery::example1::{h, h_inv};
use explab::gallery::example2::{unstable_break, Example2Chart};
use explab_bench::{model_grid, quadrant_grid};

fn example1(c: &mut Criterion) {
    let pts = quadrant_grid(20, 0.9);
    let model = model_grid(20);
    c.bench_function("example1 h", |b| {
        b.iter(|| {
            pts.iter()
                .map(|&p| h(black_box(p)).map_or(0.0, |q| q.x))
                .sum::<f64>()
        })
    });
    c.bench_function("example1 h_inv", |b| {
        b.iter(|| {
            model
                .iter()
                .map(|&p| h_inv(black_box(p)).map_or(0.0, |q| q.x))
                .sum::<f64>()
        })
    });
}

fn example2(c: &mut Criterion) {
    let chart = Example2Chart::new(1e-12).unwrap();
    let pts = quadrant_grid(10, 2.0);
    let model: Vec<_> = pts.iter().filter_map(|&p| chart.h(p).ok()).collect();
    c.bench_function("example2 unstable_break", |b| {
        b.iter(|| unstable_break(black_box(2.0), 1e-12))
    });
    c.bench_function("example2 h", |b| {
        b.iter(|| {
            pts.iter()
                .map(|&p| chart.h(black_box(p)).map_or(0.0, |q| q.x))
                .sum::<f64>()
        })
    });
    c.bench_function("example2 h_inv", |b| {
        b.iter(|| {
            model
                .iter()
                .map(|&p| chart.h_inv(black_box(p)).map_or(0.0, |q| q.x))
                .sum::<f64>()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = example1, example2
}
criterion_main!(benches);
