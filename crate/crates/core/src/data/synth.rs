//! Synthetic ranking datasets.
//!
//! * `DenseRegression`: Gaussian features and real-valued targets from a
//!   hidden linear model, a low-dimensional regression-style problem.
//! * `SparseSimilarity`: sparse nonnegative document-like vectors whose
//!   target is the inner product with one held-out "query" document, which
//!   gives almost every example its own distinct score.
//!
//! Generation is deterministic for a given seed (ChaCha8 stream).

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal, Zipf};

use super::{Dataset, SparseMatrix, ViewMode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyntheticKind {
    DenseRegression,
    SparseSimilarity,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense-regression" => Ok(SyntheticKind::DenseRegression),
            "sparse-similarity" => Ok(SyntheticKind::SparseSimilarity),
            other => Err(Error::invalid(format!(
                "unknown dataset kind {other:?} (expected dense-regression or sparse-similarity)"
            ))),
        }
    }
}

impl std::fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SyntheticKind::DenseRegression => "dense-regression",
            SyntheticKind::SparseSimilarity => "sparse-similarity",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SyntheticConfig {
    pub kind: SyntheticKind,
    /// Examples.
    pub m: usize,
    /// Features.
    pub n: usize,
    /// Expected fraction of nonzero features per example, in `(0, 1]`.
    pub sparsity: f64,
    pub seed: u64,
    /// Standard deviation of the Gaussian noise added to regression
    /// targets. Ignored for `SparseSimilarity`.
    pub noise: f64,
    /// Exponent of the Zipf law that decides how popular each feature is in
    /// `SparseSimilarity` data.
    pub zipf_exponent: f64,
}

impl SyntheticConfig {
    pub fn new(kind: SyntheticKind, m: usize, n: usize, sparsity: f64, seed: u64) -> Self {
        SyntheticConfig {
            kind,
            m,
            n,
            sparsity,
            seed,
            noise: 0.0,
            zipf_exponent: 1.0,
        }
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn generate(&self) -> Result<Dataset> {
        if self.m < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 examples, got {}",
                self.m
            )));
        }
        if self.n == 0 {
            return Err(Error::invalid("need at least 1 feature"));
        }
        if !(self.sparsity > 0.0 && self.sparsity <= 1.0) {
            return Err(Error::invalid(format!(
                "sparsity must be in (0, 1], got {}",
                self.sparsity
            )));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::invalid(format!(
                "noise must be >= 0, got {}",
                self.noise
            )));
        }
        if !(self.zipf_exponent.is_finite() && self.zipf_exponent >= 0.0) {
            return Err(Error::invalid("zipf exponent must be >= 0"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            SyntheticKind::DenseRegression => self.dense_regression(&mut rng),
            SyntheticKind::SparseSimilarity => self.sparse_similarity(&mut rng),
        }
    }

    fn dense_regression(&self, rng: &mut ChaCha8Rng) -> Result<Dataset> {
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let hidden: Vec<f64> = (0..self.n).map(|_| normal.sample(rng)).collect();
        let mut columns = Vec::with_capacity(self.m);
        let mut y = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            let mut col = Vec::new();
            let mut target = 0.0;
            for (i, &v) in hidden.iter().enumerate() {
                if self.sparsity < 1.0 && !rng.random_bool(self.sparsity) {
                    continue;
                }
                let x: f64 = normal.sample(rng);
                target += v * x;
                col.push((i as u32, x));
            }
            if self.noise > 0.0 {
                target += self.noise * normal.sample(rng);
            }
            columns.push(col);
            y.push(target);
        }
        let x = SparseMatrix::from_columns(self.n, columns, ViewMode::Dual)?;
        Dataset::new(x, y, None)
    }

    fn sparse_similarity(&self, rng: &mut ChaCha8Rng) -> Result<Dataset> {
        let nnz_dist = Binomial::new(self.n as u64, self.sparsity)
            .map_err(|e| Error::invalid(format!("bad sparsity: {e}")))?;
        let popularity = Zipf::new(self.n as f64, self.zipf_exponent)
            .map_err(|e| Error::invalid(format!("bad zipf exponent: {e}")))?;
        let weights: Vec<f64> = (1..=self.n)
            .map(|k| (k as f64).powf(-self.zipf_exponent))
            .collect();

        // One extra document serves as the query and is removed afterwards.
        let mut docs: Vec<Vec<(u32, f64)>> = (0..=self.m)
            .map(|_| {
                let nnz = nnz_dist.sample(rng) as usize;
                let features = if nnz * 4 > self.n {
                    weighted_without_replacement(rng, &weights, nnz)
                } else {
                    rejection_without_replacement(rng, &popularity, nnz)
                };
                features
                    .into_iter()
                    .map(|i| (i, 1.0 - rng.random::<f64>()))
                    .collect()
            })
            .collect();
        let target_at = rng.random_range(0..docs.len());
        let target = docs.remove(target_at);

        let mut query = vec![0.0; self.n];
        for &(i, v) in &target {
            query[i as usize] = v;
        }
        let y = docs
            .iter()
            .map(|d| d.iter().map(|&(i, v)| v * query[i as usize]).sum())
            .collect();
        let x = SparseMatrix::from_columns(self.n, docs, ViewMode::Dual)?;
        Dataset::new(x, y, None)
    }
}

/// Shorthand for [`SyntheticConfig::generate`] without target noise.
pub fn generate_synthetic(
    kind: SyntheticKind,
    m: usize,
    n: usize,
    sparsity: f64,
    seed: u64,
) -> Result<Dataset> {
    SyntheticConfig::new(kind, m, n, sparsity, seed).generate()
}

/// `k` distinct 0-based feature indices drawn from the Zipf law, sorted.
/// Used when `k` is small relative to the number of features.
fn rejection_without_replacement(
    rng: &mut ChaCha8Rng,
    popularity: &Zipf<f64>,
    k: usize,
) -> Vec<u32> {
    let mut seen = HashSet::with_capacity(k);
    while seen.len() < k {
        let rank = popularity.sample(rng) as u32;
        seen.insert(rank - 1);
    }
    let mut out: Vec<u32> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// `k` distinct indices by weighted sampling without replacement
/// (exponential-key method), sorted.
fn weighted_without_replacement(rng: &mut ChaCha8Rng, weights: &[f64], k: usize) -> Vec<u32> {
    let mut keyed: Vec<(f64, u32)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let u: f64 = 1.0 - rng.random::<f64>();
            (u.ln() / w, i as u32)
        })
        .collect();
    keyed.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<u32> = keyed.into_iter().take(k).map(|(_, i)| i).collect();
    out.sort_unstable();
    out
}
