use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qba_bench::test_vector;
use qba_core::{bluestein_classical, build_plan, dft_direct, fft_radix2, run_qba, RunOptions};
use std::hint::black_box;

fn fft(c: &mut Criterion) {
    let mut g = c.benchmark_group("fft_radix2");
    for n in [64, 1024, 16384] {
        let x = test_vector(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| {
            b.iter(|| fft_radix2(black_box(x), false).unwrap())
        });
    }
    g.finish();
}

fn arbitrary_length(c: &mut Criterion) {
    let mut g = c.benchmark_group("arbitrary_length_dft");
    for n in [63, 257, 1000] {
        let x = test_vector(n);
        g.bench_with_input(BenchmarkId::new("direct", n), &x, |b, x| {
            b.iter(|| dft_direct(black_box(x)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("bluestein", n), &x, |b, x| {
            b.iter(|| bluestein_classical(black_box(x)).unwrap())
        });
    }
    g.finish();
}

fn simulated(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_qba");
    for n in [3, 100, 1000] {
        let x = test_vector(n);
        let plan = build_plan(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| {
            b.iter(|| run_qba(black_box(x), &plan, RunOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, fft, arbitrary_length, simulated);
criterion_main!(benches);
