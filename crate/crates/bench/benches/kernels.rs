use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use trireflect_bench::{patterned_set, spread_set};
use trireflect_core::metrics::lambda1;
use trireflect_core::wordlength::{bfs_lengths, sumset_lengths};
use trireflect_core::{Engine, GeneratingSet};

fn sumset_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("sumset");
    for n in [64, 257, 1024, 4099] {
        let a = patterned_set(n);
        let s = spread_set(n).offsets();
        group.bench_with_input(BenchmarkId::new("level_step", n), &n, |b, _| {
            b.iter(|| black_box(a.sumset(&s).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("dense_dense", n), &n, |b, _| {
            b.iter(|| black_box(a.sumset(&a).unwrap()))
        });
    }
    group.finish();
}

fn stabilizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("stabilizer");
    for n in [60, 360, 2520] {
        let a = patterned_set(n);
        group.bench_with_input(BenchmarkId::new("divisor_scan", n), &n, |b, _| {
            b.iter(|| black_box(a.stabilizer()))
        });
        if n <= 360 {
            group.bench_with_input(BenchmarkId::new("exhaustive", n), &n, |b, _| {
                b.iter(|| black_box(a.stabilizer_exhaustive()))
            });
        }
    }
    group.finish();
}

fn engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("word_lengths");
    for n in [50, 200, 1000] {
        let set = spread_set(n);
        group.bench_with_input(BenchmarkId::new("bfs", n), &set, |b, s| {
            b.iter(|| black_box(bfs_lengths(s).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("sumset", n), &set, |b, s| {
            b.iter(|| black_box(sumset_lengths(s).unwrap()))
        });
    }
    let interval = GeneratingSet::new(1000, 1, 999).unwrap();
    group.bench_function("sumset_interval_1000", |b| {
        b.iter(|| black_box(sumset_lengths(&interval).unwrap()))
    });
    group.finish();
}

fn lambda(c: &mut Criterion) {
    let set = spread_set(500);
    c.bench_function("lambda1_500", |b| {
        b.iter(|| black_box(lambda1(&set, Engine::Sumset).unwrap()))
    });
}

criterion_group!(benches, sumset_kernel, stabilizer, engines, lambda);
criterion_main!(benches);
