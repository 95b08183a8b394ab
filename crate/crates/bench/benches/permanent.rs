// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multiboson::{permanent_naive, permanent_ryser, permanent_ryser_parallel};
use multiboson_bench::haar_block;

fn naive_vs_ryser(c: &mut Criterion) {
    let mut group = c.benchmark_group("permanent_small");
    for n in [4, 6, 8, 10] {
        let a = haar_block(n, n as u64);
        group.bench_with_input(BenchmarkId::new("naive", n), &a, |b, a| {
            b.iter(|| permanent_naive(a).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ryser", n), &a, |b, a| {
            b.iter(|| permanent_ryser(a).unwrap())
        });
    }
    group.finish();
}

fn ryser_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("ryser_scaling");
    group.sample_size(10);
    for n in [12, 14, 16, 18, 20] {
        let a = haar_block(n, n as u64);
        group.bench_with_input(BenchmarkId::new("serial", n), &a, |b, a| {
            b.iter(|| permanent_ryser(a).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel_8", n), &a, |b, a| {
            b.iter(|| permanent_ryser_parallel(a, 8).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, naive_vs_ryser, ryser_scaling);
criterion_main!(benches);
