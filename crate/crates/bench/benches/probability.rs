// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multiboson::{
    build_distribution, haar_random, probability_general, probability_general_unpaired,
    GramMatrix, PortConfiguration,
};

fn ladder_gram(n: usize) -> GramMatrix {
    // Toeplitz overlaps 0.6^|i-j| of equally delayed pulses
    let entries = multiboson::CMatrix::from_fn(n, n, |i, j| {
        multiboson::Complex64::new(0.6f64.powi((i as i32 - j as i32).abs()), 0.0)
    });
    GramMatrix::new(entries).unwrap()
}

fn general_path(c: &mut Criterion) {
    let mut group = c.benchmark_group("probability_general");
    group.sample_size(10);
    for n in [3, 4, 5, 6, 7] {
        let m = 2 * n;
        let u = haar_random(m, 1).unwrap();
        let mut occ = vec![0; m];
        occ[..n].iter_mut().for_each(|o| *o = 1);
        let cfg = PortConfiguration::new(m, (0..n).collect(), occ).unwrap();
        let g = ladder_gram(n);
        group.bench_with_input(BenchmarkId::new("paired", n), &n, |b, _| {
            b.iter(|| probability_general(&u, &cfg, &g).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("unpaired", n), &n, |b, _| {
            b.iter(|| probability_general_unpaired(&u, &cfg, &g).unwrap())
        });
    }
    group.finish();
}

fn full_distribution(c: &mut Criterion) {
    let u = haar_random(6, 2).unwrap();
    let g = ladder_gram(3);
    c.bench_function("distribution_m6_n3", |b| {
        b.iter(|| build_distribution(&u, &[0, 1, 2], &g).unwrap())
    });
}

criterion_group!(benches, general_path, full_distribution);
criterion_main!(benches);
