//! Reference implementations used only by tests. None of these touch the
//! library's loss, tree or evaluation code paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ranksvm_core::{Dataset, SparseMatrix, ViewMode};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Direct pairwise hinge risk over dense examples:
/// `(1/N) Σ_{y_i < y_j} max(0, 1 + wᵀx_i − wᵀx_j)` with the subgradient
/// summing `x_i − x_j` over pairs with positive hinge.
pub struct PairSum {
    pub loss: f64,
    pub subgradient: Vec<f64>,
    pub pairs: u64,
}

pub fn pair_sum(dense: &[Vec<f64>], y: &[f64], w: &[f64]) -> PairSum {
    let p: Vec<f64> = dense.iter().map(|x| dot(x, w)).collect();
    let n = w.len();
    let mut loss = 0.0;
    let mut grad = vec![0.0; n];
    let mut pairs = 0u64;
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] < y[j] {
                pairs += 1;
                let h = 1.0 + p[i] - p[j];
                if h > 0.0 {
                    loss += h;
                    for k in 0..n {
                        grad[k] += dense[i][k] - dense[j][k];
                    }
                }
            }
        }
    }
    let norm = pairs as f64;
    PairSum {
        loss: loss / norm,
        subgradient: grad.into_iter().map(|g| g / norm).collect(),
        pairs,
    }
}

/// Direct objective `R(w) + λ‖w‖²`.
pub fn direct_objective(dense: &[Vec<f64>], y: &[f64], w: &[f64], lambda: f64) -> f64 {
    pair_sum(dense, y, w).loss + lambda * dot(w, w)
}

/// Swapped pair count by enumeration.
pub fn swapped_pairs(scores: &[f64], y: &[f64]) -> (u64, u64) {
    let (mut swapped, mut pairs) = (0, 0);
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] < y[j] {
                pairs += 1;
                if scores[i] > scores[j] {
                    swapped += 1;
                }
            }
        }
    }
    (swapped, pairs)
}

/// Mann-Whitney U of the positives (label 1) from the rank sum, for
/// tie-free scores: the number of (negative, positive) pairs ordered
/// correctly.
pub fn mann_whitney_u(scores: &[f64], labels: &[u8]) -> u64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0u64;
    let mut positives = 0u64;
    for (rank0, &i) in order.iter().enumerate() {
        if labels[i] == 1 {
            rank_sum += rank0 as u64 + 1;
            positives += 1;
        }
    }
    rank_sum - positives * (positives + 1) / 2
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dataset(dense: &[Vec<f64>], y: &[f64]) -> Dataset {
    let n = dense.first().map_or(1, Vec::len);
    let x = SparseMatrix::from_dense_examples(n, dense, ViewMode::Dual).unwrap();
    Dataset::new(x, y.to_vec(), None).unwrap()
}

/// `|a − b| <= tol · max(|a|, |b|)`, treating exact equality as close.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

#[derive(Clone, Copy, Debug)]
pub enum YRegime {
    Distinct,
    Tied,
    TwoLevel,
}

#[derive(Clone, Copy, Debug)]
pub enum WRegime {
    Zero,
    Random,
    /// Small integer weights on integer features: many pairs land exactly
    /// on the hinge kink.
    Kink,
}

/// Integer-valued features in `[-3, 3]`; `density` of them nonzero.
pub fn integer_features(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.random_bool(density) {
                        f64::from(rng.random_range(-3i32..=3))
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

pub fn utilities(rng: &mut ChaCha8Rng, m: usize, regime: YRegime) -> Vec<f64> {
    loop {
        let y: Vec<f64> = (0..m)
            .map(|_| match regime {
                YRegime::Distinct => rng.random_range(-10.0..10.0),
                YRegime::Tied => f64::from(rng.random_range(0..3)),
                YRegime::TwoLevel => f64::from(rng.random_range(0..2)),
            })
            .collect();
        if y.iter().any(|&v| v != y[0]) {
            return y;
        }
    }
}

pub fn weights(rng: &mut ChaCha8Rng, n: usize, regime: WRegime) -> Vec<f64> {
    match regime {
        WRegime::Zero => vec![0.0; n],
        WRegime::Random => (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        WRegime::Kink => (0..n)
            .map(|_| f64::from(rng.random_range(-1i32..=1)))
            .collect(),
    }
}
