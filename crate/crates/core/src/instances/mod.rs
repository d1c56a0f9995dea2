//! Instance data model: the constraint matrix, general and normalized
//! covering/packing instances, primal-dual solutions, the text file format
//! and instance generators.

mod format;
mod generators;
mod matrix;

use serde::Serialize;

pub use format::{parse_instance, serialize_instance};
pub use generators::{
    gen_random_general, gen_random_rs, gen_set_cover, gen_vertex_cover_lp, parse_edge_list,
    parse_set_system,
};
pub use matrix::SparseNonNegMatrix;

use crate::error::InstanceError;

/// Relative tolerance under which an entry just below 1 is accepted (and
/// snapped to 1) at the normalized-instance boundary.
pub const NORMALIZED_TOLERANCE: f64 = 1e-12;

/// Covering LP `min c^T x, Ax >= b, x >= 0` and its packing dual.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralInstance {
    matrix: SparseNonNegMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl GeneralInstance {
    pub fn new(matrix: SparseNonNegMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self, InstanceError> {
        check_vector("b", &b, matrix.n_rows())?;
        check_vector("c", &c, matrix.n_cols())?;
        Ok(Self { matrix, b, c })
    }

    pub fn matrix(&self) -> &SparseNonNegMatrix {
        &self.matrix
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }
}

fn check_vector(what: &'static str, v: &[f64], expected: usize) -> Result<(), InstanceError> {
    if v.len() != expected {
        return Err(InstanceError::LengthMismatch { what, expected, got: v.len() });
    }
    match v.iter().find(|x| !x.is_finite() || **x < 0.0) {
        Some(&value) => Err(InstanceError::InvalidVector { what, value }),
        None => Ok(()),
    }
}

/// Width and sparsity statistics of a normalized instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstanceStats {
    /// Max column sum.
    pub gamma_p: f64,
    /// Max row sum.
    pub gamma_d: f64,
    /// Largest entry (1 for an entry-free matrix).
    pub a_max: f64,
    /// Max entries per row.
    pub row_sparsity: usize,
    pub nnz: usize,
}

impl InstanceStats {
    fn of(matrix: &SparseNonNegMatrix) -> Self {
        Self {
            gamma_p: matrix.max_col_sum(),
            gamma_d: matrix.max_row_sum(),
            a_max: matrix.max_entry(),
            row_sparsity: matrix.row_sparsity(),
            nnz: matrix.nnz(),
        }
    }
}

/// Normal form `min 1^T x, Ax >= 1` with every stored entry at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedInstance {
    matrix: SparseNonNegMatrix,
    stats: InstanceStats,
}

impl NormalizedInstance {
    /// Validates the normal form. Entries within [`NORMALIZED_TOLERANCE`]
    /// below 1 are snapped to exactly 1; anything smaller is rejected, as is
    /// a row with no entries.
    pub fn new(matrix: SparseNonNegMatrix) -> Result<Self, InstanceError> {
        if let Some((row, col, value)) = matrix
            .entries()
            .find(|&(_, _, v)| v < 1.0 - NORMALIZED_TOLERANCE)
        {
            return Err(InstanceError::EntryBelowOne { row, col, value });
        }
        if let Some(&row) = matrix.empty_rows().first() {
            return Err(InstanceError::InfeasibleCovering { row });
        }
        let matrix = if matrix.entries().any(|(_, _, v)| v < 1.0) {
            matrix.map_values(|_, _, v| v.max(1.0))
        } else {
            matrix
        };
        let stats = InstanceStats::of(&matrix);
        Ok(Self { matrix, stats })
    }

    pub fn from_entries<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::new(SparseNonNegMatrix::from_entries(n_rows, n_cols, entries)?)
    }

    /// Builds from dense rows, mostly for tests and examples.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self, InstanceError> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(InstanceError::LengthMismatch { what: "dense row", expected: n_cols, got: bad.len() });
        }
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::from_entries(rows.len(), n_cols, entries)
    }

    /// The instance with no rows and no columns.
    pub fn empty() -> Self {
        Self::new(SparseNonNegMatrix::empty(0, 0)).expect("empty instance is valid")
    }

    pub fn matrix(&self) -> &SparseNonNegMatrix {
        &self.matrix
    }

    pub fn stats(&self) -> &InstanceStats {
        &self.stats
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    /// Columns without entries. They can never be selected.
    pub fn inactive_columns(&self) -> Vec<usize> {
        self.matrix.empty_cols()
    }
}

pub fn gamma_p(inst: &NormalizedInstance) -> f64 {
    inst.stats.gamma_p
}

pub fn gamma_d(inst: &NormalizedInstance) -> f64 {
    inst.stats.gamma_d
}

pub fn a_max(inst: &NormalizedInstance) -> f64 {
    inst.stats.a_max
}

/// Either kind of instance, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    General(GeneralInstance),
    Normalized(NormalizedInstance),
}

impl Instance {
    pub fn matrix(&self) -> &SparseNonNegMatrix {
        match self {
            Instance::General(g) => g.matrix(),
            Instance::Normalized(n) => n.matrix(),
        }
    }
}

impl From<GeneralInstance> for Instance {
    fn from(g: GeneralInstance) -> Self {
        Instance::General(g)
    }
}

impl From<NormalizedInstance> for Instance {
    fn from(n: NormalizedInstance) -> Self {
        Instance::Normalized(n)
    }
}

/// Primal `x` (one per set) and dual `y` (one per element) with their
/// objective values `1^T x` and `1^T y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimalDualSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
}

impl PrimalDualSolution {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let primal_objective = x.iter().sum();
        let dual_objective = y.iter().sum();
        Self { x, y, primal_objective, dual_objective }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_statistics() {
        let one = NormalizedInstance::from_dense(&[vec![1.0]]).unwrap();
        assert_eq!((gamma_p(&one), gamma_d(&one), a_max(&one)), (1.0, 1.0, 1.0));

        let a = NormalizedInstance::from_dense(&[vec![1.0, 2.0], vec![3.0, 0.0]]).unwrap();
        assert_eq!(gamma_p(&a), 4.0);
        assert_eq!(gamma_d(&a), 3.0);
        assert_eq!(a_max(&a), 3.0);

        let two = NormalizedInstance::from_dense(&[vec![2.0]]).unwrap();
        assert_eq!((gamma_p(&two), gamma_d(&two), a_max(&two)), (2.0, 2.0, 2.0));

        assert_eq!(a_max(&NormalizedInstance::empty()), 1.0);
    }

    #[test]
    fn normalized_boundary() {
        let snapped = NormalizedInstance::from_dense(&[vec![1.0 - 1e-14]]).unwrap();
        assert_eq!(snapped.matrix().get(0, 0), 1.0);
        assert!(matches!(
            NormalizedInstance::from_dense(&[vec![0.5]]),
            Err(InstanceError::EntryBelowOne { .. })
        ));
        assert!(matches!(
            NormalizedInstance::from_dense(&[vec![1.0], vec![0.0]]),
            Err(InstanceError::InfeasibleCovering { row: 1 })
        ));
        let with_empty_col = NormalizedInstance::from_dense(&[vec![1.0, 0.0]]).unwrap();
        assert_eq!(with_empty_col.inactive_columns(), vec![1]);
    }

    #[test]
    fn general_vectors_validated() {
        let m = SparseNonNegMatrix::from_entries(1, 1, [(0, 0, 1.0)]).unwrap();
        assert!(GeneralInstance::new(m.clone(), vec![1.0], vec![1.0]).is_ok());
        assert!(matches!(
            GeneralInstance::new(m.clone(), vec![1.0, 2.0], vec![1.0]),
            Err(InstanceError::LengthMismatch { what: "b", .. })
        ));
        assert!(matches!(
            GeneralInstance::new(m, vec![1.0], vec![-1.0]),
            Err(InstanceError::InvalidVector { what: "c", .. })
        ));
    }

    #[test]
    fn solution_objectives() {
        let s = PrimalDualSolution::new(vec![0.5, 0.25], vec![1.0]);
        assert_eq!(s.primal_objective, 0.75);
        assert_eq!(s.dual_objective, 1.0);
    }
}
