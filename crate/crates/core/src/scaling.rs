//! Timing of the risk routines across dataset sizes, and least-squares
//! slopes on log-log axes.

use std::time::Instant;

use crate::data::{Dataset, SyntheticConfig, SyntheticKind};
use crate::error::{Error, Result};
use crate::pairloss::{evaluate, Backend};

#[derive(Clone, Debug, PartialEq)]
pub struct Timing {
    pub m: usize,
    pub backend: Backend,
    pub mean_s: f64,
    pub stdev_s: f64,
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two points for a slope"));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::invalid("log-log fit needs positive coordinates"));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("all x coordinates are equal"));
    }
    Ok(sxy / sxx)
}

/// Mean and sample standard deviation of the wall time of one
/// loss/subgradient evaluation on `data` at `w`.
pub fn time_evaluation(
    data: &Dataset,
    w: &[f64],
    backend: Backend,
    repeats: usize,
) -> Result<Timing> {
    if repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    let pairs = data.validate()?.pair_count;
    // Warm-up run, not timed.
    std::hint::black_box(evaluate(backend, data.x(), data.y(), w, pairs)?);
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let eval = evaluate(backend, data.x(), data.y(), w, pairs)?;
        std::hint::black_box(&eval);
        samples.push(start.elapsed().as_secs_f64());
    }
    let k = samples.len() as f64;
    let mean_s = samples.iter().sum::<f64>() / k;
    let stdev_s = if samples.len() > 1 {
        (samples.iter().map(|s| (s - mean_s).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(Timing {
        m: data.m(),
        backend,
        mean_s,
        stdev_s,
    })
}

/// Settings for a size sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub kind: SyntheticKind,
    pub n: usize,
    pub sparsity: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kind: SyntheticKind::SparseSimilarity,
            n: 1000,
            sparsity: 0.02,
            repeats: 5,
            seed: 0,
        }
    }
}

/// Deterministic "random" weight vector used for timing, uniform in
/// `[-1, 1)`.
pub fn probe_weights(n: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f3e_1647);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Times `backend` at every size, generating one dataset per size.
pub fn sweep(sizes: &[usize], backend: Backend, cfg: &SweepConfig) -> Result<Vec<Timing>> {
    let w = probe_weights(cfg.n, cfg.seed);
    sizes
        .iter()
        .map(|&m| {
            let data =
                SyntheticConfig::new(cfg.kind, m, cfg.n, cfg.sparsity, cfg.seed).generate()?;
            time_evaluation(&data, &w, backend, cfg.repeats)
        })
        .collect()
}

/// Log-log slope of mean time against `m`.
pub fn timing_slope(timings: &[Timing]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = timings.iter().map(|t| (t.m as f64, t.mean_s)).collect();
    loglog_slope(&pts)
}
