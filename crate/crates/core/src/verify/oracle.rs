//! Exact optimum of tiny covering/packing LPs by basic-solution enumeration.
//!
//! A vertex of `{x >= 0 : A x >= 1}` is fixed by a support `J` of columns and
//! an equally sized set `R` of tight rows with `A[R, J] x_J = 1`. Enumerating
//! every such square system, keeping the feasible solutions and taking the
//! best objective gives the optimum, since both LPs attain it at a vertex.
//! The packing side is the same enumeration on the transpose.

use crate::error::VerifyError;
use crate::instances::NormalizedInstance;

/// Max `n_rows + n_cols` accepted by the oracle.
pub const ORACLE_SIZE_CAP: usize = 12;

const PIVOT_EPS: f64 = 1e-12;
const FEAS_EPS: f64 = 1e-9;

/// Optimum of `min 1^T x, A x >= 1, x >= 0`; `+inf` if infeasible.
pub fn exact_opt(inst: &NormalizedInstance) -> Result<f64, VerifyError> {
    let dense = dense(inst)?;
    let (n, m) = (inst.n_rows(), inst.n_cols());
    if n == 0 {
        return Ok(0.0);
    }
    let mut best = f64::INFINITY;
    for_each_vertex(n, m, |i, j| dense[i][j], |_, cols, x| {
        let mut full = vec![0.0; m];
        for (&j, &v) in cols.iter().zip(x) {
            full[j] = v;
        }
        let covered = (0..n).all(|i| (0..m).map(|j| dense[i][j] * full[j]).sum::<f64>() >= 1.0 - FEAS_EPS);
        if covered {
            best = best.min(x.iter().sum());
        }
    });
    Ok(best)
}

/// Optimum of `max 1^T y, A^T y <= 1, y >= 0`.
pub fn exact_dual_opt(inst: &NormalizedInstance) -> Result<f64, VerifyError> {
    let dense = dense(inst)?;
    let (n, m) = (inst.n_rows(), inst.n_cols());
    let mut best = 0.0f64;
    // Tight columns play the role of constraint rows here.
    for_each_vertex(m, n, |j, i| dense[i][j], |_, support, y| {
        let mut full = vec![0.0; n];
        for (&i, &v) in support.iter().zip(y) {
            full[i] = v;
        }
        let packed = (0..m).all(|j| (0..n).map(|i| dense[i][j] * full[i]).sum::<f64>() <= 1.0 + FEAS_EPS);
        if packed {
            best = best.max(y.iter().sum());
        }
    });
    Ok(best)
}

fn dense(inst: &NormalizedInstance) -> Result<Vec<Vec<f64>>, VerifyError> {
    let size = inst.n_rows() + inst.n_cols();
    if size > ORACLE_SIZE_CAP {
        return Err(VerifyError::TooLarge(size, ORACLE_SIZE_CAP));
    }
    let mut d = vec![vec![0.0; inst.n_cols()]; inst.n_rows()];
    for (i, j, v) in inst.matrix().entries() {
        d[i][j] = v;
    }
    Ok(d)
}

/// Calls `visit(rows, cols, x)` for every nonsingular square subsystem
/// `M[rows, cols] x = 1` whose solution is non-negative.
fn for_each_vertex(
    n_constraints: usize,
    n_vars: usize,
    entry: impl Fn(usize, usize) -> f64,
    mut visit: impl FnMut(&[usize], &[usize], &[f64]),
) {
    for k in 1..=n_constraints.min(n_vars) {
        for rows in combinations(n_constraints, k) {
            for cols in combinations(n_vars, k) {
                let mut system: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| entry(r, c)).collect())
                    .collect();
                let Some(x) = solve_ones(&mut system) else { continue };
                if x.iter().all(|&v| v >= -FEAS_EPS) {
                    let x: Vec<f64> = x.into_iter().map(|v| v.max(0.0)).collect();
                    visit(&rows, &cols, &x);
                }
            }
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else { break };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// Solves `M x = 1` by Gaussian elimination with partial pivoting.
fn solve_ones(m: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let k = m.len();
    let scale = m.iter().flatten().fold(0.0f64, |a, &v| a.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut rhs = vec![1.0; k];
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() <= PIVOT_EPS * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..k {
            let factor = m[row][col] / m[col][col];
            if factor != 0.0 {
                for c in col..k {
                    m[row][c] -= factor * m[col][c];
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let tail: f64 = (row + 1..k).map(|c| m[row][c] * x[c]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_random_rs, gen_vertex_cover_lp};

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 3).len(), 0);
    }

    #[test]
    fn known_optima() {
        let single = NormalizedInstance::from_dense(&[vec![2.0]]).unwrap();
        assert_eq!(exact_opt(&single).unwrap(), 0.5);

        let edge = gen_vertex_cover_lp(&[(0, 1)]).unwrap();
        assert_eq!(exact_opt(&edge).unwrap(), 1.0);

        let triangle = gen_vertex_cover_lp(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((exact_opt(&triangle).unwrap() - 1.5).abs() < 1e-12);

        let path = gen_vertex_cover_lp(&[(0, 1), (1, 2)]).unwrap();
        assert!((exact_opt(&path).unwrap() - 1.0).abs() < 1e-12);

        assert_eq!(exact_opt(&NormalizedInstance::empty()).unwrap(), 0.0);
    }

    #[test]
    fn size_cap() {
        let big = gen_random_rs(7, 6, 2, 2.0, 0).unwrap();
        assert_eq!(exact_opt(&big).unwrap_err(), VerifyError::TooLarge(13, 12));
    }

    #[test]
    fn primal_and_dual_enumerations_agree() {
        for seed in 0..60 {
            let n = 1 + (seed as usize % 6);
            let m = 1 + (seed as usize * 7 % 5);
            let k = 3.min(m);
            let inst = gen_random_rs(n, m, k, 4.0, seed).unwrap();
            let p = exact_opt(&inst).unwrap();
            let d = exact_dual_opt(&inst).unwrap();
            assert!((p - d).abs() <= 1e-9 * p.max(1.0), "seed {seed}: {p} vs {d}");
        }
    }
}
