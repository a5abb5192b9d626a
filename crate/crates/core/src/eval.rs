//! Ranking quality: the fraction of preference pairs a scorer puts in the
//! wrong order.

use crate::data::SparseMatrix;
use crate::error::{Error, Result};
use crate::ostree::OSTree;
use crate::pairloss::count_pairs_unchecked;

#[derive(Clone, Debug, PartialEq)]
pub struct RankingErrorReport {
    /// `swapped / pair_count`, or the mean of per-query errors for grouped
    /// data.
    pub error: f64,
    /// Preference pairs `y_i < y_j` scored `f_i > f_j`.
    pub swapped: u64,
    /// Preference pairs scored `f_i == f_j`. These count as correct in
    /// `error`; a constant scorer has `tied_predictions == pair_count`.
    pub tied_predictions: u64,
    pub pair_count: u64,
}

/// Scores `Xᵀw`.
pub fn predict(x: &SparseMatrix, w: &[f64]) -> Result<Vec<f64>> {
    x.transpose_mul(w)
}

pub fn pairwise_ranking_error(scores: &[f64], y: &[f64]) -> Result<RankingErrorReport> {
    check_inputs(scores, y)?;
    let pair_count = count_pairs_unchecked(y);
    if pair_count == 0 {
        return Err(Error::DegenerateDataset(
            "all utility scores are tied".into(),
        ));
    }
    let (swapped, tied_predictions) = count_swaps(scores, y);
    Ok(RankingErrorReport {
        error: swapped as f64 / pair_count as f64,
        swapped,
        tied_predictions,
        pair_count,
    })
}

/// Same report computed by enumerating all pairs.
pub fn brute_force_ranking_error(scores: &[f64], y: &[f64]) -> Result<RankingErrorReport> {
    check_inputs(scores, y)?;
    let (mut pairs, mut swapped, mut tied) = (0u64, 0u64, 0u64);
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] < y[j] {
                pairs += 1;
                if scores[i] > scores[j] {
                    swapped += 1;
                } else if scores[i] == scores[j] {
                    tied += 1;
                }
            }
        }
    }
    if pairs == 0 {
        return Err(Error::DegenerateDataset(
            "all utility scores are tied".into(),
        ));
    }
    Ok(RankingErrorReport {
        error: swapped as f64 / pairs as f64,
        swapped,
        tied_predictions: tied,
        pair_count: pairs,
    })
}

/// Mean of per-query errors over queries that have at least one preference
/// pair, in ascending label order. Counts are summed.
pub fn grouped_ranking_error(
    scores: &[f64],
    y: &[f64],
    qids: &[u64],
) -> Result<RankingErrorReport> {
    check_inputs(scores, y)?;
    if qids.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "query id vector",
            expected: y.len(),
            got: qids.len(),
        });
    }
    let mut members: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
    for (j, &q) in qids.iter().enumerate() {
        members.entry(q).or_default().push(j);
    }
    let mut total = RankingErrorReport {
        error: 0.0,
        swapped: 0,
        tied_predictions: 0,
        pair_count: 0,
    };
    let mut groups = 0usize;
    for idx in members.values() {
        let gs: Vec<f64> = idx.iter().map(|&j| scores[j]).collect();
        let gy: Vec<f64> = idx.iter().map(|&j| y[j]).collect();
        match pairwise_ranking_error(&gs, &gy) {
            Ok(r) => {
                groups += 1;
                total.error += r.error;
                total.swapped += r.swapped;
                total.tied_predictions += r.tied_predictions;
                total.pair_count += r.pair_count;
            }
            Err(Error::DegenerateDataset(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if groups == 0 {
        return Err(Error::DegenerateDataset(
            "no query has a preference pair".into(),
        ));
    }
    total.error /= groups as f64;
    Ok(total)
}

/// Sweeps the examples in ascending score order. Each block of equal scores
/// is first queried against the tree of strictly lower-scored examples (any
/// of those with a larger utility is a swap) and then inserted.
fn count_swaps(scores: &[f64], y: &[f64]) -> (u64, u64) {
    let m = scores.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(y[a].total_cmp(&y[b])));

    let mut tree = OSTree::with_capacity(m);
    let mut swapped = 0u64;
    let mut tied = 0u64;
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let block = &order[start..end];
        for &i in block {
            swapped += tree.count_larger_finite(y[i]) as u64;
        }
        // Within the block, utilities are sorted; pairs with distinct
        // utilities are tied predictions.
        let len = block.len() as u64;
        let mut same = 0u64;
        let mut run = 1u64;
        for k in 1..block.len() {
            if y[block[k]] == y[block[k - 1]] {
                run += 1;
            } else {
                same += run * (run - 1) / 2;
                run = 1;
            }
        }
        same += run * (run - 1) / 2;
        tied += len * (len - 1) / 2 - same;
        for &i in block {
            tree.insert_finite(y[i]);
        }
        start = end;
    }
    (swapped, tied)
}

fn check_inputs(scores: &[f64], y: &[f64]) -> Result<()> {
    if scores.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "score vector",
            expected: y.len(),
            got: scores.len(),
        });
    }
    if scores.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::invalid("scores and utilities must be finite"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ViewMode;
    use proptest::prelude::*;

    #[test]
    fn perfect_and_reversed() {
        let y = [0.3, -1.0, 2.5, 7.0];
        assert_eq!(pairwise_ranking_error(&y, &y).unwrap().error, 0.0);
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let r = pairwise_ranking_error(&neg, &y).unwrap();
        assert_eq!((r.error, r.swapped, r.pair_count), (1.0, 6, 6));
    }

    #[test]
    fn one_swapped_pair() {
        let r = pairwise_ranking_error(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert_eq!(r.swapped, 1);
        assert!((r.error - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_scores_are_all_ties() {
        let r = pairwise_ranking_error(&[0.0; 4], &[1.0, 2.0, 2.0, 3.0]).unwrap();
        assert_eq!((r.swapped, r.tied_predictions, r.pair_count), (0, 5, 5));
    }

    #[test]
    fn degenerate_and_mismatched() {
        assert!(matches!(
            pairwise_ranking_error(&[1.0, 2.0], &[1.0, 1.0]),
            Err(Error::DegenerateDataset(_))
        ));
        assert!(pairwise_ranking_error(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn grouped_means() {
        let y = [1.0, 2.0, 1.0, 2.0];
        let f = [0.0, 1.0, 1.0, 0.0];
        let r = grouped_ranking_error(&f, &y, &[1, 1, 2, 2]).unwrap();
        assert_eq!(r.error, 0.5);
        let single = grouped_ranking_error(&f[..2], &y[..2], &[5, 5]).unwrap();
        assert_eq!(single, pairwise_ranking_error(&f[..2], &y[..2]).unwrap());
        assert!(grouped_ranking_error(&f, &[1.0; 4], &[1, 1, 2, 2]).is_err());
    }

    #[test]
    fn predict_examples() {
        let x = SparseMatrix::from_columns(3, vec![vec![(0, 1.0)], vec![(2, 1.0)]], ViewMode::Dual)
            .unwrap();
        assert_eq!(predict(&x, &[0.0; 3]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(predict(&x, &[4.0, 5.0, 6.0]).unwrap(), vec![4.0, 6.0]);
        assert!(predict(&x, &[1.0]).is_err());
    }

    fn tied_vectors() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..60).prop_flat_map(|m| {
            (
                prop::collection::vec((-4i32..4).prop_map(f64::from), m),
                prop::collection::vec((0i32..4).prop_map(f64::from), m),
            )
        })
    }

    proptest! {
        #[test]
        fn tree_path_matches_brute((f, y) in tied_vectors()) {
            match brute_force_ranking_error(&f, &y) {
                Ok(b) => prop_assert_eq!(pairwise_ranking_error(&f, &y).unwrap(), b),
                Err(_) => prop_assert!(pairwise_ranking_error(&f, &y).is_err()),
            }
        }

        #[test]
        fn invariant_under_increasing_maps((f, y) in tied_vectors()) {
            prop_assume!(count_pairs_unchecked(&y) > 0);
            let g: Vec<f64> = f.iter().map(|v| v.powi(3) * 2.0 + 5.0).collect();
            prop_assert_eq!(pairwise_ranking_error(&f, &y).unwrap(), pairwise_ranking_error(&g, &y).unwrap());
        }
    }
}
