//! Reduction of a general covering/packing pair to the normal form
//! (`b = c = 1`, every nonzero entry at least 1) and the inverse map for
//! solutions.
//!
//! The reduction runs in a fixed order:
//! 1. rows with `b_i = 0` are dropped (their dual is 0);
//! 2. columns with `c_j = 0` are saturated (primal is unbounded, at no cost),
//!    and every row they touch is dropped;
//! 3. surviving entries become `A_ij / (b_i c_j)`, then are divided by the
//!    smallest such value so the minimum entry is exactly 1.

use std::fmt::Write;

use serde::Serialize;

use crate::error::{InstanceError, VerifyError};
use crate::instances::{GeneralInstance, NormalizedInstance, PrimalDualSolution, SparseNonNegMatrix};

/// Values in `[1 - SNAP, 1)` after scaling are rounded up to 1.
const SNAP: f64 = 1e-12;

/// Everything needed to map a normalized solution back.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationMap {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Rows with `b_i = 0`.
    pub removed_rows: Vec<usize>,
    /// Columns with `c_j = 0`; reported as saturated.
    pub forced_columns: Vec<usize>,
    /// Rows covered by some forced column (and not already removed).
    pub rows_deleted_by_forced_columns: Vec<usize>,
    /// Original index of each normalized row.
    pub surviving_rows: Vec<usize>,
    /// Original index of each normalized column.
    pub surviving_cols: Vec<usize>,
    /// Smallest surviving `A_ij / (b_i c_j)`; 1 when no entry survives.
    pub scale_min: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl NormalizationMap {
    /// Sidecar text written next to a normalized instance file.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# normalization map").unwrap();
        writeln!(out, "original {} {}", self.n_rows, self.n_cols).unwrap();
        writeln!(out, "scale_min {:?}", self.scale_min).unwrap();
        for (label, list) in [
            ("removed_rows", &self.removed_rows),
            ("forced_columns", &self.forced_columns),
            ("rows_deleted_by_forced_columns", &self.rows_deleted_by_forced_columns),
            ("surviving_rows", &self.surviving_rows),
            ("surviving_cols", &self.surviving_cols),
        ] {
            out.push_str(label);
            for v in list {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Value of an original primal variable after back-mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PrimalValue {
    Finite(f64),
    /// Zero-cost column set to +infinity by the reduction.
    Saturated,
}

impl PrimalValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PrimalValue::Finite(v) => Some(v),
            PrimalValue::Saturated => None,
        }
    }
}

/// A solution of the original (general) LP pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginalSolution {
    pub x: Vec<PrimalValue>,
    pub y: Vec<f64>,
    /// `c^T x`, with saturated columns contributing 0.
    pub primal_objective: f64,
    /// `b^T y`.
    pub dual_objective: f64,
}

pub fn normalize(g: &GeneralInstance) -> Result<(NormalizedInstance, NormalizationMap), InstanceError> {
    let a = g.matrix();
    let (b, c) = (g.b(), g.c());

    let removed_rows: Vec<usize> = (0..a.n_rows()).filter(|&i| b[i] == 0.0).collect();
    let forced_columns: Vec<usize> = (0..a.n_cols()).filter(|&j| c[j] == 0.0).collect();

    let mut row_alive: Vec<bool> = b.iter().map(|&v| v > 0.0).collect();
    let mut rows_deleted_by_forced_columns = Vec::new();
    for &j in &forced_columns {
        for &(i, _) in a.col(j) {
            if row_alive[i] {
                row_alive[i] = false;
                rows_deleted_by_forced_columns.push(i);
            }
        }
    }
    rows_deleted_by_forced_columns.sort_unstable();

    let surviving_rows: Vec<usize> = (0..a.n_rows()).filter(|&i| row_alive[i]).collect();
    let surviving_cols: Vec<usize> = (0..a.n_cols()).filter(|&j| c[j] > 0.0).collect();
    let mut col_index = vec![usize::MAX; a.n_cols()];
    for (new, &j) in surviving_cols.iter().enumerate() {
        col_index[j] = new;
    }

    let mut scaled = Vec::new();
    for (new_i, &i) in surviving_rows.iter().enumerate() {
        if a.row(i).is_empty() {
            return Err(InstanceError::InfeasibleCovering { row: i });
        }
        for &(j, v) in a.row(i) {
            // Forced columns cannot appear here: their rows were removed.
            scaled.push((new_i, col_index[j], v / (b[i] * c[j])));
        }
    }
    let scale_min = scaled.iter().map(|&(_, _, v)| v).reduce(f64::min).unwrap_or(1.0);
    let entries = scaled.into_iter().map(|(i, j, v)| {
        let t = v / scale_min;
        (i, j, if (1.0 - SNAP..1.0).contains(&t) { 1.0 } else { t })
    });
    let matrix = SparseNonNegMatrix::from_entries(surviving_rows.len(), surviving_cols.len(), entries)?;
    let normalized = NormalizedInstance::new(matrix)?;

    let map = NormalizationMap {
        n_rows: a.n_rows(),
        n_cols: a.n_cols(),
        removed_rows,
        forced_columns,
        rows_deleted_by_forced_columns,
        surviving_rows,
        surviving_cols,
        scale_min,
        b: b.to_vec(),
        c: c.to_vec(),
    };
    Ok((normalized, map))
}

/// Maps a solution of the normalized instance back to the original
/// variables: `x_j = x~_j / (c_j * scale_min)`, `y_i = y~_i / (b_i * scale_min)`.
pub fn denormalize(sol: &PrimalDualSolution, map: &NormalizationMap) -> Result<OriginalSolution, VerifyError> {
    if sol.x.len() != map.surviving_cols.len() {
        return Err(VerifyError::DimensionMismatch {
            what: "x",
            expected: map.surviving_cols.len(),
            got: sol.x.len(),
        });
    }
    if sol.y.len() != map.surviving_rows.len() {
        return Err(VerifyError::DimensionMismatch {
            what: "y",
            expected: map.surviving_rows.len(),
            got: sol.y.len(),
        });
    }
    let mut x = vec![PrimalValue::Saturated; map.n_cols];
    for (&j, &xt) in map.surviving_cols.iter().zip(&sol.x) {
        x[j] = PrimalValue::Finite(xt / (map.c[j] * map.scale_min));
    }
    let mut y = vec![0.0; map.n_rows];
    for (&i, &yt) in map.surviving_rows.iter().zip(&sol.y) {
        y[i] = yt / (map.b[i] * map.scale_min);
    }
    let primal_objective = x
        .iter()
        .zip(&map.c)
        .filter_map(|(v, &c)| v.finite().map(|v| c * v))
        .sum();
    let dual_objective = y.iter().zip(&map.b).map(|(y, b)| y * b).sum();
    Ok(OriginalSolution { x, y, primal_objective, dual_objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn general(rows: &[Vec<f64>], b: Vec<f64>, c: Vec<f64>) -> GeneralInstance {
        let n_cols = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        GeneralInstance::new(SparseNonNegMatrix::from_entries(rows.len(), n_cols, entries).unwrap(), b, c).unwrap()
    }

    #[test]
    fn three_step_reduction_on_single_entry() {
        let (n, map) = normalize(&general(&[vec![3.0]], vec![2.0], vec![5.0])).unwrap();
        assert!((map.scale_min - 0.3).abs() < 1e-15);
        assert_eq!(n.matrix().get(0, 0), 1.0);

        let back = denormalize(&PrimalDualSolution::new(vec![1.0], vec![1.0]), &map).unwrap();
        let x = back.x[0].finite().unwrap();
        assert!((x - 2.0 / 3.0).abs() < 1e-15);
        assert!((back.primal_objective - 10.0 / 3.0).abs() < 1e-12);
        assert!(3.0 * x >= 2.0 - 1e-12);
    }

    #[test]
    fn identity_case() {
        let (n, map) = normalize(&general(&[vec![1.0]], vec![1.0], vec![1.0])).unwrap();
        assert_eq!(n.matrix().get(0, 0), 1.0);
        assert_eq!(map.scale_min, 1.0);
        let sol = PrimalDualSolution::new(vec![0.7], vec![0.4]);
        let back = denormalize(&sol, &map).unwrap();
        assert_eq!(back.x, vec![PrimalValue::Finite(0.7)]);
        assert_eq!(back.y, vec![0.4]);
    }

    #[test]
    fn zero_demand_row_removed() {
        let (n, map) = normalize(&general(&[vec![1.0]], vec![0.0], vec![1.0])).unwrap();
        assert_eq!(n.n_rows(), 0);
        assert_eq!(map.removed_rows, vec![0]);
        assert_eq!(map.scale_min, 1.0);
        let back = denormalize(&PrimalDualSolution::new(vec![0.0], vec![]), &map).unwrap();
        assert_eq!(back.y, vec![0.0]);
    }

    #[test]
    fn zero_cost_column_saturates_its_rows() {
        // Column 1 is free and touches row 0; row 1 only uses column 0.
        let g = general(&[vec![2.0, 1.0], vec![4.0, 0.0]], vec![1.0, 1.0], vec![1.0, 0.0]);
        let (n, map) = normalize(&g).unwrap();
        assert_eq!(map.forced_columns, vec![1]);
        assert_eq!(map.rows_deleted_by_forced_columns, vec![0]);
        assert_eq!(map.surviving_rows, vec![1]);
        assert_eq!(map.surviving_cols, vec![0]);
        assert_eq!((n.n_rows(), n.n_cols()), (1, 1));
        let back = denormalize(&PrimalDualSolution::new(vec![1.0], vec![1.0]), &map).unwrap();
        assert_eq!(back.x[1], PrimalValue::Saturated);
        assert_eq!(back.y[0], 0.0);
        assert!((back.x[0].finite().unwrap() - 0.25).abs() < 1e-15);
        assert!((back.primal_objective - 0.25).abs() < 1e-15);
    }

    #[test]
    fn empty_surviving_row_is_infeasible() {
        let g = general(&[vec![1.0], vec![0.0]], vec![1.0, 1.0], vec![1.0]);
        assert_eq!(normalize(&g).unwrap_err(), InstanceError::InfeasibleCovering { row: 1 });
    }

    #[test]
    fn minimum_entry_is_exactly_one() {
        let g = general(&[vec![0.3, 0.7], vec![0.1, 0.0]], vec![3.0, 0.7], vec![1.1, 0.9]);
        let (n, _) = normalize(&g).unwrap();
        assert_eq!(n.matrix().min_entry(), Some(1.0));
    }

    #[test]
    fn dimension_mismatch() {
        let (_, map) = normalize(&general(&[vec![1.0]], vec![1.0], vec![1.0])).unwrap();
        assert!(denormalize(&PrimalDualSolution::new(vec![], vec![1.0]), &map).is_err());
        assert!(denormalize(&PrimalDualSolution::new(vec![1.0], vec![]), &map).is_err());
    }

    #[test]
    fn sidecar_text() {
        let g = general(&[vec![2.0, 1.0], vec![4.0, 0.0]], vec![1.0, 1.0], vec![1.0, 0.0]);
        let (_, map) = normalize(&g).unwrap();
        let text = map.to_text();
        assert!(text.contains("forced_columns 1\n"));
        assert!(text.contains("scale_min 4.0\n"));
        assert!(text.contains("removed_rows\n"));
    }
}
