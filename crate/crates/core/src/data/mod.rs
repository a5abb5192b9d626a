//! Training data: the sparse feature matrix, utility scores and optional
//! query labels, plus svmlight I/O and synthetic generators.

mod sparse;
pub mod svmlight;
pub mod synth;

pub use sparse::{SparseMatrix, ViewMode};
pub use svmlight::{parse_svmlight, parse_svmlight_str, write_svmlight, ParseOptions};
pub use synth::{generate_synthetic, SyntheticConfig, SyntheticKind};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pairloss::{count_pairs_unchecked, EmpiricalRisk};

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    x: SparseMatrix,
    y: Vec<f64>,
    qid: Option<Vec<u64>>,
}

/// Outcome of [`Dataset::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSummary {
    /// Preference pairs, summed over queries for grouped data.
    pub pair_count: u64,
    /// Queries that contribute to the loss (1 for ungrouped data).
    pub groups_used: usize,
    /// Queries skipped because all their scores tie.
    pub groups_skipped: usize,
}

impl Dataset {
    pub fn new(x: SparseMatrix, y: Vec<f64>, qid: Option<Vec<u64>>) -> Result<Self> {
        if y.len() != x.m() {
            return Err(Error::DimensionMismatch {
                what: "utility score vector",
                expected: x.m(),
                got: y.len(),
            });
        }
        if let Some(q) = &qid {
            if q.len() != x.m() {
                return Err(Error::DimensionMismatch {
                    what: "query id vector",
                    expected: x.m(),
                    got: q.len(),
                });
            }
        }
        if let Some(k) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "utility score of example {k} is not finite"
            )));
        }
        Ok(Dataset { x, y, qid })
    }

    pub fn x(&self) -> &SparseMatrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn qid(&self) -> Option<&[u64]> {
        self.qid.as_deref()
    }

    /// Number of examples.
    pub fn m(&self) -> usize {
        self.x.m()
    }

    /// Number of features.
    pub fn n(&self) -> usize {
        self.x.n()
    }

    /// Checks that the data can be trained on and counts preference pairs.
    /// Queries whose scores all tie are reported (and logged) but only an
    /// all-degenerate dataset is an error.
    pub fn validate(&self) -> Result<PairSummary> {
        if self.m() == 0 {
            return Err(Error::DegenerateDataset("dataset is empty".into()));
        }
        match &self.qid {
            None => {
                let pair_count = count_pairs_unchecked(&self.y);
                if pair_count == 0 {
                    return Err(Error::DegenerateDataset(
                        "all utility scores are tied".into(),
                    ));
                }
                Ok(PairSummary {
                    pair_count,
                    groups_used: 1,
                    groups_skipped: 0,
                })
            }
            Some(_) => {
                let mut summary = PairSummary {
                    pair_count: 0,
                    groups_used: 0,
                    groups_skipped: 0,
                };
                for (label, idx) in self.groups() {
                    let gy: Vec<f64> = idx.iter().map(|&j| self.y[j]).collect();
                    let pairs = count_pairs_unchecked(&gy);
                    if pairs == 0 {
                        log::warn!("query {label}: all utility scores tied, skipped");
                        summary.groups_skipped += 1;
                    } else {
                        summary.pair_count += pairs;
                        summary.groups_used += 1;
                    }
                }
                if summary.groups_used == 0 {
                    return Err(Error::DegenerateDataset(
                        "every query has tied utility scores".into(),
                    ));
                }
                Ok(summary)
            }
        }
    }

    /// Example indices per query label, in ascending label order. Ungrouped
    /// data is one group labelled 0.
    pub fn groups(&self) -> Vec<(u64, Vec<usize>)> {
        match &self.qid {
            None => vec![(0, (0..self.m()).collect())],
            Some(q) => {
                let mut members: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
                for (j, &label) in q.iter().enumerate() {
                    members.entry(label).or_default().push(j);
                }
                members.into_iter().collect()
            }
        }
    }

    /// The empirical risk over this dataset, grouped by query if labels are
    /// present.
    pub fn risk(&self) -> Result<EmpiricalRisk> {
        match &self.qid {
            None => EmpiricalRisk::global(&self.x, &self.y),
            Some(q) => EmpiricalRisk::grouped(&self.x, &self.y, q),
        }
    }

    /// Subset of examples, in the given order.
    pub fn select(&self, examples: &[usize]) -> Dataset {
        Dataset {
            x: self.x.select_examples(examples),
            y: examples.iter().map(|&j| self.y[j]).collect(),
            qid: self
                .qid
                .as_ref()
                .map(|q| examples.iter().map(|&j| q[j]).collect()),
        }
    }

    /// Splits into the first `k` examples and the rest.
    pub fn split_at(&self, k: usize) -> (Dataset, Dataset) {
        let k = k.min(self.m());
        let head: Vec<usize> = (0..k).collect();
        let tail: Vec<usize> = (k..self.m()).collect();
        (self.select(&head), self.select(&tail))
    }

    /// Copy with the feature dimension raised to `n`.
    pub fn with_dims(&self, n: usize) -> Result<Dataset> {
        Ok(Dataset {
            x: self.x.with_dims(n)?,
            y: self.y.clone(),
            qid: self.qid.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(y: &[f64], qid: Option<Vec<u64>>) -> Dataset {
        let dense: Vec<Vec<f64>> = y.iter().map(|&v| vec![v]).collect();
        let x = SparseMatrix::from_dense_examples(1, &dense, ViewMode::Dual).unwrap();
        Dataset::new(x, y.to_vec(), qid).unwrap()
    }

    #[test]
    fn validate_examples() {
        let s = dataset(&[1.0, 2.0], None).validate().unwrap();
        assert_eq!(s.pair_count, 1);

        assert!(matches!(
            dataset(&[1.0, 1.0], None).validate(),
            Err(Error::DegenerateDataset(_))
        ));

        let s = dataset(&[1.0, 1.0, 1.0, 2.0], Some(vec![1, 1, 2, 2]))
            .validate()
            .unwrap();
        assert_eq!(
            s,
            PairSummary {
                pair_count: 1,
                groups_used: 1,
                groups_skipped: 1
            }
        );

        let empty = Dataset::new(
            SparseMatrix::from_columns(1, vec![], ViewMode::Dual).unwrap(),
            vec![],
            None,
        )
        .unwrap();
        assert!(empty.validate().is_err());
    }

    #[test]
    fn constructor_checks() {
        let x =
            SparseMatrix::from_dense_examples(1, &[vec![1.0], vec![2.0]], ViewMode::Dual).unwrap();
        assert!(Dataset::new(x.clone(), vec![1.0], None).is_err());
        assert!(Dataset::new(x.clone(), vec![1.0, 2.0], Some(vec![1])).is_err());
        assert!(Dataset::new(x, vec![1.0, f64::INFINITY], None).is_err());
    }

    #[test]
    fn groups_sorted_by_label() {
        let d = dataset(&[1.0, 2.0, 3.0, 4.0], Some(vec![9, 2, 9, 2]));
        assert_eq!(d.groups(), vec![(2, vec![1, 3]), (9, vec![0, 2])]);
        let (a, b) = d.split_at(1);
        assert_eq!(a.y(), &[1.0]);
        assert_eq!(b.qid().unwrap(), &[2, 9, 2]);
    }
}
