//! Sparse feature matrix with `n` features (rows) and `m` examples (columns).
//!
//! The column view (one index/value list per example) serves `Xᵀw`; the
//! row view (one list per feature) serves `X v`. Keeping both roughly
//! doubles memory, which is why the row view can be switched off.

use crate::error::{Error, Result};

/// One compressed direction of the matrix: `ptr[k]..ptr[k + 1]` indexes the
/// entries of outer slot `k`.
#[derive(Clone, Debug, PartialEq)]
struct Compressed {
    ptr: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl Compressed {
    fn outer_len(&self) -> usize {
        self.ptr.len() - 1
    }

    #[inline]
    fn lane(&self, k: usize) -> (&[u32], &[f64]) {
        let r = self.ptr[k]..self.ptr[k + 1];
        (&self.idx[r.clone()], &self.val[r])
    }

    /// Transposes into a compressed structure with `inner` outer slots.
    /// Entries within each new lane come out in increasing index order.
    fn transpose(&self, inner: usize) -> Compressed {
        let mut counts = vec![0usize; inner + 1];
        for &i in &self.idx {
            counts[i as usize + 1] += 1;
        }
        for k in 0..inner {
            counts[k + 1] += counts[k];
        }
        let ptr = counts.clone();
        let mut next = counts;
        let mut idx = vec![0u32; self.idx.len()];
        let mut val = vec![0f64; self.val.len()];
        for outer in 0..self.outer_len() {
            let (is, vs) = self.lane(outer);
            for (&i, &v) in is.iter().zip(vs) {
                let slot = &mut next[i as usize];
                idx[*slot] = outer as u32;
                val[*slot] = v;
                *slot += 1;
            }
        }
        Compressed { ptr, idx, val }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ViewMode {
    /// Column and row views.
    #[default]
    Dual,
    /// Column view only; `X v` falls back to scattering over examples.
    ColumnOnly,
}

#[derive(Clone, Debug)]
pub struct SparseMatrix {
    n: usize,
    cols: Compressed,
    rows: Option<Compressed>,
}

impl PartialEq for SparseMatrix {
    /// Matrices are equal when they hold the same entries, regardless of
    /// which views are materialized.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cols == other.cols
    }
}

impl SparseMatrix {
    /// Builds a matrix from per-example `(feature, value)` lists. Feature
    /// indices must be strictly increasing within each example and `< n`;
    /// values must be finite.
    pub fn from_columns(n: usize, columns: Vec<Vec<(u32, f64)>>, mode: ViewMode) -> Result<Self> {
        let nnz = columns.iter().map(Vec::len).sum();
        let mut ptr = Vec::with_capacity(columns.len() + 1);
        let mut idx = Vec::with_capacity(nnz);
        let mut val = Vec::with_capacity(nnz);
        ptr.push(0);
        for (j, col) in columns.into_iter().enumerate() {
            let mut prev: Option<u32> = None;
            for (i, v) in col {
                if i as usize >= n {
                    return Err(Error::invalid(format!(
                        "example {j}: feature index {i} out of range for {n} features"
                    )));
                }
                if prev.is_some_and(|p| i <= p) {
                    return Err(Error::invalid(format!(
                        "example {j}: feature indices must be strictly increasing"
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::invalid(format!(
                        "example {j}: non-finite value for feature {i}"
                    )));
                }
                prev = Some(i);
                idx.push(i);
                val.push(v);
            }
            ptr.push(idx.len());
        }
        let cols = Compressed { ptr, idx, val };
        let rows = match mode {
            ViewMode::Dual => Some(cols.transpose(n)),
            ViewMode::ColumnOnly => None,
        };
        Ok(SparseMatrix { n, cols, rows })
    }

    /// Dense `n × m` input given example by example (`dense[j][i]` is
    /// feature `i` of example `j`). Zeros are not stored.
    pub fn from_dense_examples(n: usize, dense: &[Vec<f64>], mode: ViewMode) -> Result<Self> {
        let mut columns = Vec::with_capacity(dense.len());
        for ex in dense {
            if ex.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "dense example length",
                    expected: n,
                    got: ex.len(),
                });
            }
            columns.push(
                ex.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(i, &v)| (i as u32, v))
                    .collect(),
            );
        }
        Self::from_columns(n, columns, mode)
    }

    /// Number of features.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of examples.
    pub fn m(&self) -> usize {
        self.cols.outer_len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.idx.len()
    }

    pub fn mode(&self) -> ViewMode {
        if self.rows.is_some() {
            ViewMode::Dual
        } else {
            ViewMode::ColumnOnly
        }
    }

    /// Feature indices and values of example `j`.
    pub fn example(&self, j: usize) -> (&[u32], &[f64]) {
        self.cols.lane(j)
    }

    /// Example indices and values of feature `i`, if the row view exists.
    pub fn feature(&self, i: usize) -> Option<(&[u32], &[f64])> {
        self.rows.as_ref().map(|r| r.lane(i))
    }

    /// Returns a copy with the row view built or dropped.
    pub fn with_mode(&self, mode: ViewMode) -> SparseMatrix {
        let rows = match mode {
            ViewMode::Dual => Some(
                self.rows
                    .clone()
                    .unwrap_or_else(|| self.cols.transpose(self.n)),
            ),
            ViewMode::ColumnOnly => None,
        };
        SparseMatrix {
            n: self.n,
            cols: self.cols.clone(),
            rows,
        }
    }

    /// Copy with feature dimension raised to `n`.
    pub fn with_dims(&self, n: usize) -> Result<SparseMatrix> {
        if n < self.n {
            return Err(Error::invalid(format!(
                "cannot shrink feature dimension from {} to {n}",
                self.n
            )));
        }
        let mut out = SparseMatrix {
            n,
            cols: self.cols.clone(),
            rows: None,
        };
        if self.rows.is_some() {
            out.rows = Some(out.cols.transpose(n));
        }
        Ok(out)
    }

    /// Sub-matrix made of the given examples, in the given order.
    pub fn select_examples(&self, examples: &[usize]) -> SparseMatrix {
        let columns = examples
            .iter()
            .map(|&j| {
                let (is, vs) = self.example(j);
                is.iter().copied().zip(vs.iter().copied()).collect()
            })
            .collect();
        Self::from_columns(self.n, columns, self.mode()).expect("entries come from a valid matrix")
    }

    /// `Xᵀw` (one score per example), via the column view.
    pub fn transpose_mul(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_len("weight vector", self.n, w.len())?;
        Ok((0..self.m()).map(|j| self.dot_example(j, w)).collect())
    }

    /// `⟨x_j, w⟩`.
    #[inline]
    pub fn dot_example(&self, j: usize, w: &[f64]) -> f64 {
        let (is, vs) = self.cols.lane(j);
        is.iter().zip(vs).map(|(&i, &v)| v * w[i as usize]).sum()
    }

    /// `X v` (one value per feature). Uses the row view when present.
    ///
    /// Both code paths add the contributions of examples to each feature in
    /// increasing example order, so they agree bitwise.
    pub fn mul(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len("example vector", self.m(), v.len())?;
        let out = match &self.rows {
            Some(rows) => (0..self.n)
                .map(|i| {
                    let (js, xs) = rows.lane(i);
                    let mut acc = 0.0;
                    for (&j, &x) in js.iter().zip(xs) {
                        acc += x * v[j as usize];
                    }
                    acc
                })
                .collect(),
            None => {
                let mut out = vec![0.0; self.n];
                self.scatter_add(v, &mut out);
                out
            }
        };
        Ok(out)
    }

    /// `out += X v` by walking the column view.
    pub fn scatter_add(&self, v: &[f64], out: &mut [f64]) {
        for (j, &coef) in v.iter().enumerate() {
            let (is, vs) = self.cols.lane(j);
            for (&i, &x) in is.iter().zip(vs) {
                out[i as usize] += x * coef;
            }
        }
    }

    /// Dense copy as `[example][feature]`.
    pub fn to_dense_examples(&self) -> Vec<Vec<f64>> {
        (0..self.m())
            .map(|j| {
                let mut row = vec![0.0; self.n];
                let (is, vs) = self.example(j);
                for (&i, &v) in is.iter().zip(vs) {
                    row[i as usize] = v;
                }
                row
            })
            .collect()
    }

    fn check_len(&self, what: &'static str, expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what,
                expected,
                got,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> SparseMatrix {
        // 3 features, 2 examples.
        SparseMatrix::from_columns(
            3,
            vec![vec![(0, 1.0), (2, -2.0)], vec![(1, 4.0)]],
            ViewMode::Dual,
        )
        .unwrap()
    }

    #[test]
    fn views_agree_on_small_matrix() {
        let x = small();
        assert_eq!(x.m(), 2);
        assert_eq!(x.nnz(), 3);
        assert_eq!(x.feature(2).unwrap(), (&[0u32][..], &[-2.0][..]));
        assert_eq!(x.transpose_mul(&[1.0, 1.0, 1.0]).unwrap(), vec![-1.0, 4.0]);
        assert_eq!(x.mul(&[1.0, 2.0]).unwrap(), vec![1.0, 8.0, -2.0]);
        assert_eq!(
            x.with_mode(ViewMode::ColumnOnly).mul(&[1.0, 2.0]).unwrap(),
            vec![1.0, 8.0, -2.0]
        );
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(
            SparseMatrix::from_columns(2, vec![vec![(1, 1.0), (1, 2.0)]], ViewMode::Dual).is_err()
        );
        assert!(SparseMatrix::from_columns(2, vec![vec![(2, 1.0)]], ViewMode::Dual).is_err());
        assert!(SparseMatrix::from_columns(2, vec![vec![(0, f64::NAN)]], ViewMode::Dual).is_err());
    }

    #[test]
    fn dimension_checks() {
        let x = small();
        assert!(matches!(
            x.transpose_mul(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(x.mul(&[1.0]).is_err());
        assert!(x.with_dims(2).is_err());
        let wide = x.with_dims(5).unwrap();
        assert_eq!(wide.n(), 5);
        assert_eq!(wide.feature(4).unwrap().0.len(), 0);
    }

    #[test]
    fn select_examples_reorders() {
        let x = small();
        let s = x.select_examples(&[1, 0]);
        assert_eq!(s.example(0), x.example(1));
        assert_eq!(s.example(1), x.example(0));
    }

    fn random_matrix() -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
        (1usize..12, 1usize..30).prop_flat_map(|(n, m)| {
            let cell = prop_oneof![3 => Just(0.0), 2 => -5.0f64..5.0];
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(cell, n), m),
            )
        })
    }

    proptest! {
        #[test]
        fn products_match_dense_reference((n, dense) in random_matrix(), seed in 0u64..1000) {
            let x = SparseMatrix::from_dense_examples(n, &dense, ViewMode::Dual).unwrap();
            prop_assert_eq!(x.to_dense_examples(), dense.clone());

            let w: Vec<f64> = (0..n).map(|i| ((i as u64 * 31 + seed) % 17) as f64 - 8.0).collect();
            let p = x.transpose_mul(&w).unwrap();
            for (j, ex) in dense.iter().enumerate() {
                let reference: f64 = ex.iter().zip(&w).map(|(a, b)| a * b).sum();
                prop_assert!((p[j] - reference).abs() <= 1e-12 * (1.0 + reference.abs()));
            }

            let v: Vec<f64> = (0..dense.len()).map(|j| ((j as u64 * 7 + seed) % 5) as f64 - 2.0).collect();
            let dual = x.mul(&v).unwrap();
            let single = x.with_mode(ViewMode::ColumnOnly).mul(&v).unwrap();
            prop_assert_eq!(&dual, &single);
            for i in 0..n {
                let reference: f64 = dense.iter().zip(&v).map(|(ex, c)| ex[i] * c).sum();
                prop_assert!((dual[i] - reference).abs() <= 1e-12 * (1.0 + reference.abs()));
            }
        }
    }
}
