//! Pairwise hinge risk of a linear ranker and one of its subgradients.
//!
//! For scores `p = Xᵀw` the risk is the average over preference pairs
//! `y_i < y_j` of `max(0, 1 + p_i - p_j)`. Writing `c_i` for the number of
//! margin-active pairs in which example `i` is the lower-ranked member and
//! `d_i` for those in which it is the higher-ranked one, the risk equals
//! `Σ_i ((c_i - d_i) p_i + c_i) / N` and `X (c - d) / N` is a subgradient.
//! [`compute_frequencies`] obtains `c` and `d` with two sweeps over the
//! examples sorted by score, keeping the utility scores seen so far in an
//! [`OSTree`], for `O(ms + m log m)` total work.
//!
//! A pair `(lo, hi)` is margin-active when `p_hi - p_lo < 1`. Pairs sitting
//! exactly on the hinge kink are inactive and contribute nothing to the
//! subgradient. The brute-force oracle evaluates the same predicate, so both
//! paths select the same subgradient.

use std::collections::BTreeMap;

use crate::data::SparseMatrix;
use crate::error::{Error, Result};
use crate::ostree::OSTree;

/// Which loss/subgradient routine to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    /// Order-statistics-tree sweeps, `O(ms + m log m)`.
    #[default]
    Tree,
    /// Explicit enumeration of all pairs, `O(m² + ms)`.
    Brute,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Backend::Tree),
            "brute" => Ok(Backend::Brute),
            other => Err(Error::invalid(format!(
                "unknown backend {other:?} (expected tree or brute)"
            ))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Tree => "tree",
            Backend::Brute => "brute",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyVectors {
    /// Margin-active pairs in which the example is ranked lower.
    pub c: Vec<usize>,
    /// Margin-active pairs in which the example is ranked higher.
    pub d: Vec<usize>,
}

impl FrequencyVectors {
    /// `c - d` as floating-point coefficients.
    pub fn coefficients(&self) -> Vec<f64> {
        self.c
            .iter()
            .zip(&self.d)
            .map(|(&c, &d)| c as f64 - d as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiskEvaluation {
    pub loss: f64,
    pub subgradient: Vec<f64>,
    /// Preference pairs the loss is normalized by (summed over groups for
    /// grouped data).
    pub pair_count: u64,
}

/// Number of ordered pairs with `y_i < y_j`, computed by sorting.
pub fn count_preference_pairs(y: &[f64]) -> Result<u64> {
    check_finite("utility score", y)?;
    let n = count_pairs_unchecked(y);
    if n == 0 {
        return Err(Error::DegenerateDataset(format!(
            "no preference pairs among {} examples (all utility scores tied)",
            y.len()
        )));
    }
    Ok(n)
}

/// Like [`count_preference_pairs`] but returns 0 instead of failing.
pub(crate) fn count_pairs_unchecked(y: &[f64]) -> u64 {
    let mut sorted = y.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let m = sorted.len() as u64;
    let mut tied = 0u64;
    let mut run = 1u64;
    for k in 1..sorted.len() {
        if sorted[k] == sorted[k - 1] {
            run += 1;
        } else {
            tied += run * (run - 1) / 2;
            run = 1;
        }
    }
    tied += run * (run - 1) / 2;
    (m * m.saturating_sub(1) / 2).saturating_sub(tied)
}

/// Frequencies `c`, `d` via forward and backward sweeps over the examples
/// in ascending score order.
pub fn compute_frequencies(p: &[f64], y: &[f64]) -> Result<FrequencyVectors> {
    check_same_len(p, y)?;
    check_finite("score", p)?;
    check_finite("utility score", y)?;
    let mut tree = OSTree::with_capacity(y.len());
    Ok(frequencies_with(&mut tree, p, y))
}

fn frequencies_with(tree: &mut OSTree, p: &[f64], y: &[f64]) -> FrequencyVectors {
    let m = p.len();
    // (score, utility, index) records sorted by score keep both sweeps on
    // contiguous memory.
    let mut order: Vec<(f64, f64, u32)> = (0..m).map(|i| (p[i], y[i], i as u32)).collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut c = vec![0usize; m];
    let mut d = vec![0usize; m];

    // Forward: before querying example i, the tree holds every example j
    // with p_j - p_i < 1, and c_i counts those with a larger utility.
    tree.clear();
    let mut next = 0;
    for &(pi, yi, i) in &order {
        while next < m && order[next].0 - pi < 1.0 {
            tree.insert_finite(order[next].1);
            next += 1;
        }
        c[i as usize] = tree.count_larger_finite(yi);
    }

    // Backward: the tree holds every j with p_i - p_j < 1, and d_i counts
    // those with a smaller utility.
    tree.clear();
    let mut next = m;
    for &(pi, yi, i) in order.iter().rev() {
        while next > 0 && pi - order[next - 1].0 < 1.0 {
            tree.insert_finite(order[next - 1].1);
            next -= 1;
        }
        d[i as usize] = tree.count_smaller_finite(yi);
    }

    FrequencyVectors { c, d }
}

/// Frequencies by enumerating all pairs. Test oracle for
/// [`compute_frequencies`].
pub fn brute_force_frequencies(p: &[f64], y: &[f64]) -> Result<FrequencyVectors> {
    check_same_len(p, y)?;
    let m = p.len();
    let mut c = vec![0usize; m];
    let mut d = vec![0usize; m];
    for i in 0..m {
        for j in 0..m {
            if y[i] < y[j] && p[j] - p[i] < 1.0 {
                c[i] += 1;
                d[j] += 1;
            }
        }
    }
    Ok(FrequencyVectors { c, d })
}

/// Risk and subgradient of a single (ungrouped) set of examples.
/// `pair_count` must be [`count_preference_pairs`] of `y`.
pub fn loss_and_subgradient(
    x: &SparseMatrix,
    y: &[f64],
    w: &[f64],
    pair_count: u64,
) -> Result<RiskEvaluation> {
    let p = scores(x, y, w, pair_count)?;
    let mut tree = OSTree::with_capacity(y.len());
    Ok(tree_risk(&mut tree, x, &p, y, pair_count))
}

fn tree_risk(
    tree: &mut OSTree,
    x: &SparseMatrix,
    p: &[f64],
    y: &[f64],
    pair_count: u64,
) -> RiskEvaluation {
    let freq = frequencies_with(tree, p, y);
    let norm = pair_count as f64;
    let mut sum = 0.0;
    for ((&ci, &di), &pi) in freq.c.iter().zip(&freq.d).zip(p) {
        sum += (ci as f64 - di as f64) * pi + ci as f64;
    }
    let coef = freq.coefficients();
    let subgradient = x
        .mul(&coef)
        .expect("coefficient vector has one entry per example")
        .into_iter()
        .map(|g| g / norm)
        .collect();
    RiskEvaluation {
        loss: sum / norm,
        subgradient,
        pair_count,
    }
}

/// Reference implementation: walks every pair `(i, j)` with `y_i < y_j`,
/// adding `max(0, 1 + p_i - p_j)` to the loss and `x_i - x_j` to the
/// subgradient whenever the pair is margin-active.
///
/// Pair contributions to the subgradient are tallied per example as integer
/// coefficients before the single product with `X`, which is the same sum
/// regrouped.
pub fn brute_force_loss_and_subgradient(
    x: &SparseMatrix,
    y: &[f64],
    w: &[f64],
    pair_count: u64,
) -> Result<RiskEvaluation> {
    let p = scores(x, y, w, pair_count)?;
    Ok(brute_risk(x, &p, y, pair_count))
}

fn brute_risk(x: &SparseMatrix, p: &[f64], y: &[f64], pair_count: u64) -> RiskEvaluation {
    let m = p.len();
    let mut loss = 0.0;
    let mut coef = vec![0i64; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let (lo, hi) = if y[i] < y[j] {
                (i, j)
            } else if y[j] < y[i] {
                (j, i)
            } else {
                continue;
            };
            loss += f64::max(0.0, 1.0 + p[lo] - p[hi]);
            if p[hi] - p[lo] < 1.0 {
                coef[lo] += 1;
                coef[hi] -= 1;
            }
        }
    }
    let norm = pair_count as f64;
    let mut subgradient = vec![0.0; x.n()];
    let coef: Vec<f64> = coef.into_iter().map(|k| k as f64).collect();
    x.scatter_add(&coef, &mut subgradient);
    for g in &mut subgradient {
        *g /= norm;
    }
    RiskEvaluation {
        loss: loss / norm,
        subgradient,
        pair_count,
    }
}

/// Dispatches to the tree or brute-force routine.
pub fn evaluate(
    backend: Backend,
    x: &SparseMatrix,
    y: &[f64],
    w: &[f64],
    pair_count: u64,
) -> Result<RiskEvaluation> {
    match backend {
        Backend::Tree => loss_and_subgradient(x, y, w, pair_count),
        Backend::Brute => brute_force_loss_and_subgradient(x, y, w, pair_count),
    }
}

/// Average of per-query risks and subgradients. Preference pairs only form
/// within a query; queries without any pair are skipped and the rest are
/// averaged with equal weight, in ascending query-label order.
pub fn grouped_loss_and_subgradient(
    x: &SparseMatrix,
    y: &[f64],
    qids: &[u64],
    w: &[f64],
    backend: Backend,
) -> Result<RiskEvaluation> {
    if qids.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "query id vector",
            expected: y.len(),
            got: qids.len(),
        });
    }
    let risk = EmpiricalRisk::grouped(x, y, qids)?;
    risk.evaluate(w, backend)
}

/// One query's examples, extracted once so that repeated evaluations do not
/// pay for the partition again.
#[derive(Clone, Debug)]
pub struct QueryGroup {
    pub label: u64,
    pub x: SparseMatrix,
    pub y: Vec<f64>,
    pub pair_count: u64,
}

/// The empirical risk of a validated training set, ready for repeated
/// evaluation at different weight vectors.
#[derive(Clone, Debug)]
pub struct EmpiricalRisk {
    n: usize,
    parts: Parts,
}

#[derive(Clone, Debug)]
enum Parts {
    Global {
        x: SparseMatrix,
        y: Vec<f64>,
        pair_count: u64,
    },
    Grouped(Vec<QueryGroup>),
}

impl EmpiricalRisk {
    pub fn global(x: &SparseMatrix, y: &[f64]) -> Result<Self> {
        if x.m() != y.len() {
            return Err(Error::DimensionMismatch {
                what: "utility score vector",
                expected: x.m(),
                got: y.len(),
            });
        }
        let pair_count = count_preference_pairs(y)?;
        Ok(EmpiricalRisk {
            n: x.n(),
            parts: Parts::Global {
                x: x.clone(),
                y: y.to_vec(),
                pair_count,
            },
        })
    }

    /// Splits the examples by query label. Queries without preference pairs
    /// are dropped with a warning.
    pub fn grouped(x: &SparseMatrix, y: &[f64], qids: &[u64]) -> Result<Self> {
        if x.m() != y.len() || qids.len() != y.len() {
            return Err(Error::DimensionMismatch {
                what: "utility score / query id vector",
                expected: x.m(),
                got: if x.m() != y.len() {
                    y.len()
                } else {
                    qids.len()
                },
            });
        }
        check_finite("utility score", y)?;
        let mut members: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (j, &q) in qids.iter().enumerate() {
            members.entry(q).or_default().push(j);
        }
        let mut groups = Vec::new();
        for (label, idx) in members {
            let gy: Vec<f64> = idx.iter().map(|&j| y[j]).collect();
            let pair_count = count_pairs_unchecked(&gy);
            if pair_count == 0 {
                log::warn!("query {label}: no preference pairs, skipped");
                continue;
            }
            groups.push(QueryGroup {
                label,
                x: x.select_examples(&idx),
                y: gy,
                pair_count,
            });
        }
        if groups.is_empty() {
            return Err(Error::DegenerateDataset(
                "no query has a preference pair".into(),
            ));
        }
        Ok(EmpiricalRisk {
            n: x.n(),
            parts: Parts::Grouped(groups),
        })
    }

    /// Feature dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total preference pairs (summed over queries).
    pub fn pair_count(&self) -> u64 {
        match &self.parts {
            Parts::Global { pair_count, .. } => *pair_count,
            Parts::Grouped(groups) => groups.iter().map(|g| g.pair_count).sum(),
        }
    }

    /// Non-degenerate query groups, or `None` for ungrouped data.
    pub fn groups(&self) -> Option<&[QueryGroup]> {
        match &self.parts {
            Parts::Global { .. } => None,
            Parts::Grouped(g) => Some(g),
        }
    }

    pub fn evaluate(&self, w: &[f64], backend: Backend) -> Result<RiskEvaluation> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch {
                what: "weight vector",
                expected: self.n,
                got: w.len(),
            });
        }
        check_finite("weight", w)?;
        match &self.parts {
            Parts::Global { x, y, pair_count } => evaluate(backend, x, y, w, *pair_count),
            Parts::Grouped(groups) => {
                let mut tree = OSTree::new();
                let mut loss = 0.0;
                let mut subgradient = vec![0.0; self.n];
                for g in groups {
                    let p = g.x.transpose_mul(w)?;
                    let part = match backend {
                        Backend::Tree => tree_risk(&mut tree, &g.x, &p, &g.y, g.pair_count),
                        Backend::Brute => brute_risk(&g.x, &p, &g.y, g.pair_count),
                    };
                    loss += part.loss;
                    for (acc, v) in subgradient.iter_mut().zip(&part.subgradient) {
                        *acc += v;
                    }
                }
                let r = groups.len() as f64;
                for v in &mut subgradient {
                    *v /= r;
                }
                Ok(RiskEvaluation {
                    loss: loss / r,
                    subgradient,
                    pair_count: self.pair_count(),
                })
            }
        }
    }

    /// Risk value only.
    pub fn loss(&self, w: &[f64], backend: Backend) -> Result<f64> {
        self.evaluate(w, backend).map(|e| e.loss)
    }
}

fn scores(x: &SparseMatrix, y: &[f64], w: &[f64], pair_count: u64) -> Result<Vec<f64>> {
    if x.m() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "utility score vector",
            expected: x.m(),
            got: y.len(),
        });
    }
    if pair_count == 0 {
        return Err(Error::DegenerateDataset("pair count is zero".into()));
    }
    check_finite("weight", w)?;
    check_finite("utility score", y)?;
    x.transpose_mul(w)
}

fn check_same_len(p: &[f64], y: &[f64]) -> Result<()> {
    if p.len() == y.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what: "score vector",
            expected: y.len(),
            got: p.len(),
        })
    }
}

fn check_finite(what: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        None => Ok(()),
        Some(k) => Err(Error::invalid(format!(
            "{what} {k} is not finite ({})",
            v[k]
        ))),
    }
}
