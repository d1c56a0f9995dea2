use std::collections::HashSet;

use crate::error::InstanceError;

/// Sparse matrix with strictly positive stored entries.
///
/// Rows are elements (dual variables), columns are sets (primal variables).
/// Both a row-major and a column-major view are kept; each adjacency list is
/// sorted by the opposite index so that every traversal is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseNonNegMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, f64)>>,
    cols: Vec<Vec<(usize, f64)>>,
}

impl SparseNonNegMatrix {
    /// Builds a matrix from `(row, col, value)` triples.
    ///
    /// Zero values are dropped. Negative, non-finite, out-of-range and
    /// duplicate entries are rejected.
    pub fn from_entries<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut rows = vec![Vec::new(); n_rows];
        let mut cols = vec![Vec::new(); n_cols];
        let mut seen = HashSet::new();
        for (r, c, v) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(InstanceError::IndexOutOfRange { row: r, col: c, n_rows, n_cols });
            }
            if !v.is_finite() {
                return Err(InstanceError::NonFinite { row: r, col: c });
            }
            if v < 0.0 {
                return Err(InstanceError::NegativeEntry { row: r, col: c, value: v });
            }
            if !seen.insert((r, c)) {
                return Err(InstanceError::DuplicateEntry { row: r, col: c });
            }
            if v == 0.0 {
                continue;
            }
            rows[r].push((c, v));
            cols[c].push((r, v));
        }
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
        }
        for col in &mut cols {
            col.sort_by_key(|&(r, _)| r);
        }
        Ok(Self { n_rows, n_cols, rows, cols })
    }

    pub fn empty(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
            cols: vec![Vec::new(); n_cols],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Entries of row `i` as `(col, value)`, ascending by column.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Entries of column `j` as `(row, value)`, ascending by row.
    pub fn col(&self, j: usize) -> &[(usize, f64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(0.0)
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, v)| (i, j, v)))
    }

    /// Applies `f` to every stored value, keeping the sparsity pattern.
    pub(crate) fn map_values(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Self {
        let rows: Vec<Vec<(usize, f64)>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&(j, v)| (j, f(i, j, v))).collect())
            .collect();
        let mut cols = vec![Vec::new(); self.n_cols];
        for (i, row) in rows.iter().enumerate() {
            for &(j, v) in row {
                cols[j].push((i, v));
            }
        }
        Self { n_rows: self.n_rows, n_cols: self.n_cols, rows, cols }
    }

    /// Max column sum.
    pub fn max_col_sum(&self) -> f64 {
        self.cols
            .iter()
            .map(|c| c.iter().map(|&(_, v)| v).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Max row sum.
    pub fn max_row_sum(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(_, v)| v).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry; 1 for a matrix without entries.
    pub fn max_entry(&self) -> f64 {
        self.entries().map(|(_, _, v)| v).reduce(f64::max).unwrap_or(1.0)
    }

    pub fn min_entry(&self) -> Option<f64> {
        self.entries().map(|(_, _, v)| v).reduce(f64::min)
    }

    /// Max number of entries in a row.
    pub fn row_sparsity(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn empty_rows(&self) -> Vec<usize> {
        (0..self.n_rows).filter(|&i| self.rows[i].is_empty()).collect()
    }

    pub fn empty_cols(&self) -> Vec<usize> {
        (0..self.n_cols).filter(|&j| self.cols[j].is_empty()).collect()
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `A^T y`.
    pub fn mul_transpose_vec(&self, y: &[f64]) -> Vec<f64> {
        self.cols
            .iter()
            .map(|col| col.iter().map(|&(i, v)| v * y[i]).sum())
            .collect()
    }
}
