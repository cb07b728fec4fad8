#![allow(dead_code)]

use ihull::instances::{gen, FamilySpec};
use ihull::model::{IntMatrix, Instance};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random knapsacks `a ∈ {1..8}^n`, `n ∈ {2..5}`, `b ∈ {1..40}`.
pub fn random_knapsacks(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|t| {
            let n = rng.gen_range(2..=5);
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
            let b = rng.gen_range(1..=40);
            Instance::knapsack(format!("rand-knap-{t}"), &a, b).unwrap()
        })
        .collect()
}

/// Random `m`-row instances with entries in `[lo, hi]` and `b = A·x₀`.
pub fn random_systems(count: usize, n: usize, m: usize, lo: i64, hi: i64, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|t| {
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect())
                .collect();
            let x0: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(0..=2))).collect();
            let a = IntMatrix::from_rows(rows).unwrap();
            let b = a.mul_vec(&x0).unwrap();
            Instance::new(format!("rand-sys-{t}"), a, b).unwrap()
        })
        .collect()
}

/// 200 random knapsacks, knapsack-powers(1..5) and block-diagonal(m ≤ 2, d ≤ 3).
pub fn criterion_suite() -> Vec<Instance> {
    let mut suite = random_knapsacks(200, 20_240_601);
    for d in 1..=5 {
        suite.push(gen(&FamilySpec::KnapsackPowers { d }).unwrap());
    }
    for m in 1..=2 {
        for d in 1..=3 {
            suite.push(gen(&FamilySpec::BlockDiagonal { m, d }).unwrap());
        }
    }
    suite
}
