// SPDX-License-Identifier: Apache-2.0

//! The permanent formula against first-quantized Fock-space evolution.

use multiboson::{build_distribution, fock_oracle, haar_random, sample, GramMatrix, OutputDistribution};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn total_variation(draws: &[Vec<usize>], dist: &OutputDistribution) -> f64 {
    let count = draws.len() as f64;
    0.5 * dist
        .entries()
        .iter()
        .map(|e| {
            let hits = draws.iter().filter(|d| **d == e.occupation).count() as f64;
            (hits / count - e.probability).abs()
        })
        .sum::<f64>()
}

#[test]
fn formula_matches_oracle_on_small_systems() {
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    for m in 1..=5 {
        for n in 1..=m.min(3) {
            for trial in 0..4u64 {
                let u = haar_random(m, 100 * m as u64 + trial).unwrap();
                let mut ports: Vec<usize> = (0..m).collect();
                ports.shuffle(&mut rng);
                ports.truncate(n);
                let rank = rng.random_range(1..=n);
                let g = GramMatrix::random(n, rank, &mut rng).unwrap();
                let formula = build_distribution(&u, &ports, &g).unwrap();
                let oracle = fock_oracle(&u, &ports, &g).unwrap();
                assert!((oracle.total() - 1.0).abs() < 1e-10);
                let diff = formula.max_abs_diff(&oracle).unwrap();
                assert!(diff < 1e-9, "m={m} n={n}: {diff}");
            }
        }
    }
}

#[test]
fn four_photons_in_six_ports() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let u = haar_random(6, 3).unwrap();
    let g = GramMatrix::random(4, 3, &mut rng).unwrap();
    let formula = build_distribution(&u, &[0, 1, 3, 4], &g).unwrap();
    let oracle = fock_oracle(&u, &[0, 1, 3, 4], &g).unwrap();
    assert!(formula.max_abs_diff(&oracle).unwrap() < 1e-9);
    assert!((formula.total() - 1.0).abs() < 1e-8);
}

#[test]
fn sampler_converges() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for seed in 0..4u64 {
        let u = haar_random(3, seed).unwrap();
        let g = GramMatrix::random(2, 2, &mut rng).unwrap();
        let dist = build_distribution(&u, &[0, 1], &g).unwrap();
        let count = 20_000;
        let draws = sample(&dist, count, seed).unwrap();
        let bound = 3.0 * (dist.len() as f64 / count as f64).sqrt();
        assert!(total_variation(&draws, &dist) < bound);
    }
}
