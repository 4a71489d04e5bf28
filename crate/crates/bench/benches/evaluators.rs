use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dwpf_core::elliptic::{count_zeros, EllipticContext, Rectangle};
use dwpf_core::lattice::{dwpf_bruteforce, dwpf_transfer, LatticeSpec};
use dwpf_core::SymbolicHeight;
use num_complex::Complex64;

fn spec(size: usize) -> LatticeSpec {
    let c = |x: f64| Complex64::new(x, 0.0);
    let l = size as f64;
    LatticeSpec::felderhof(
        EllipticContext::default(),
        (0..size).map(|k| c(0.02 + 0.17 * ((k as f64 * 0.618).fract()))).collect(),
        (0..size).map(|k| c(0.01 + 0.18 * ((k as f64 * 0.414 + 0.3).fract()))).collect(),
        (0..size).map(|k| c((0.1 + 0.3 * ((k as f64 * 0.732).fract())) / l)).collect(),
        (0..size).map(|k| c((0.1 + 0.3 * ((k as f64 * 0.236 + 0.5).fract())) / l)).collect(),
        SymbolicHeight::real(0.07),
    )
    .unwrap()
}

fn bracket(c: &mut Criterion) {
    let ctx = EllipticContext::default();
    let u = Complex64::new(0.37, 0.12);
    c.bench_function("bracket", |b| b.iter(|| ctx.bracket(black_box(u))));
}

fn evaluators(c: &mut Criterion) {
    let mut group = c.benchmark_group("dwpf");
    for size in 2..=5 {
        let s = spec(size);
        group.bench_with_input(BenchmarkId::new("bruteforce", size), &s, |b, s| {
            b.iter(|| dwpf_bruteforce(black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("transfer", size), &s, |b, s| {
            b.iter(|| dwpf_transfer(black_box(s)).unwrap())
        });
    }
    for size in [8, 10] {
        let s = spec(size);
        group.bench_with_input(BenchmarkId::new("transfer", size), &s, |b, s| {
            b.iter(|| dwpf_transfer(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn zero_count(c: &mut Criterion) {
    let ctx = EllipticContext::default();
    let s = spec(3);
    let rect = Rectangle::fundamental(&ctx, Complex64::new(-0.4, -ctx.half_height()));
    c.bench_function("count_zeros_l3", |b| {
        b.iter(|| count_zeros(&ctx, |u1| dwpf_bruteforce(&s.with_u1(u1)), black_box(&rect)).unwrap())
    });
}

criterion_group!(benches, bracket, evaluators, zero_count);
criterion_main!(benches);
