//! Feasibility checks, weak-duality certificates, an exact optimum oracle for
//! tiny instances and auditing of phase traces.

mod audit;
mod oracle;

use serde::Serialize;

pub use audit::{audit_trace, AuditCheck, AuditReport};
pub use oracle::{exact_dual_opt, exact_opt, ORACLE_SIZE_CAP};

use crate::engine::{Params, SolverState};
use crate::error::VerifyError;
use crate::instances::{GeneralInstance, NormalizedInstance, PrimalDualSolution};
use crate::normalize::{OriginalSolution, PrimalValue};

/// Default feasibility tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Outcome of one feasibility check. `worst_slack` is `None` when there are
/// no constraints to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub worst_slack: Option<f64>,
}

fn dims(what: &'static str, expected: usize, got: usize) -> Result<(), VerifyError> {
    if expected == got {
        Ok(())
    } else {
        Err(VerifyError::DimensionMismatch { what, expected, got })
    }
}

/// `A x >= 1` and `x >= 0`; slack is `min_e (A x)_e - 1`.
pub fn check_primal(inst: &NormalizedInstance, x: &[f64], tol: f64) -> Result<Feasibility, VerifyError> {
    dims("x", inst.n_cols(), x.len())?;
    let worst_slack = inst.matrix().mul_vec(x).into_iter().map(|v| v - 1.0).reduce(f64::min);
    let nonneg = x.iter().all(|&v| v >= 0.0);
    Ok(Feasibility { feasible: nonneg && worst_slack.is_none_or(|s| s >= -tol), worst_slack })
}

/// `A^T y <= 1` and `y >= 0`; slack is `min_S 1 - (A^T y)_S`.
pub fn check_dual(inst: &NormalizedInstance, y: &[f64], tol: f64) -> Result<Feasibility, VerifyError> {
    dims("y", inst.n_rows(), y.len())?;
    let worst_slack = inst.matrix().mul_transpose_vec(y).into_iter().map(|v| 1.0 - v).reduce(f64::min);
    let nonneg = y.iter().all(|&v| v >= 0.0);
    Ok(Feasibility { feasible: nonneg && worst_slack.is_none_or(|s| s >= -tol), worst_slack })
}

/// Weak-duality certificate for a returned primal/dual pair.
///
/// With both sides feasible, `dual_obj <= OPT <= primal_obj`, so the pair is
/// within `ratio` of optimal without knowing OPT.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub primal: Feasibility,
    pub dual: Feasibility,
    pub primal_obj: f64,
    pub dual_obj: f64,
    /// `primal_obj / dual_obj`; `None` when the dual objective is zero.
    pub ratio: Option<f64>,
    pub claimed_eps: f64,
    /// `ratio == 1 + eps` to relative 1e-9 (vacuous when both objectives are 0).
    pub ratio_matches: bool,
    /// Exact requirement-exponent check, when the raw run state was supplied.
    pub exponent_coverage: Option<bool>,
    pub valid: bool,
}

const RATIO_TOLERANCE: f64 = 1e-9;

pub fn certify(inst: &NormalizedInstance, sol: &PrimalDualSolution, epsilon: f64) -> Result<Certificate, VerifyError> {
    let primal = check_primal(inst, &sol.x, DEFAULT_TOLERANCE)?;
    let dual = check_dual(inst, &sol.y, DEFAULT_TOLERANCE)?;
    let (primal_obj, dual_obj) = (sol.primal_objective, sol.dual_objective);
    let ratio = (dual_obj > 0.0).then(|| primal_obj / dual_obj);
    let target = 1.0 + epsilon;
    let ratio_matches = match ratio {
        Some(r) => (r - target).abs() <= RATIO_TOLERANCE * target,
        None => primal_obj == 0.0,
    };
    Ok(Certificate {
        primal,
        dual,
        primal_obj,
        dual_obj,
        ratio,
        claimed_eps: epsilon,
        ratio_matches,
        exponent_coverage: None,
        valid: primal.feasible && dual.feasible && ratio_matches,
    })
}

/// [`certify`] plus the exact coverage check on the raw run state: every
/// element's `sum_S A_eS x_S` (selection counts) and its exponent reach `f`.
pub fn certify_run(
    inst: &NormalizedInstance,
    sol: &PrimalDualSolution,
    state: &SolverState,
    params: &Params,
) -> Result<Certificate, VerifyError> {
    let mut cert = certify(inst, sol, params.epsilon)?;
    dims("x counts", inst.n_cols(), state.x.len())?;
    dims("exponents", inst.n_rows(), state.s.len())?;
    let covered = exponent_coverage(inst, state, params);
    cert.exponent_coverage = Some(covered);
    cert.valid &= covered;
    Ok(cert)
}

fn exponent_coverage(inst: &NormalizedInstance, state: &SolverState, params: &Params) -> bool {
    let a = inst.matrix();
    (0..a.n_rows()).all(|e| {
        let load: f64 = a.row(e).iter().map(|&(s, v)| v * state.x[s] as f64).sum();
        state.s[e] >= params.f && load >= params.f
    })
}

/// Feasibility of a back-mapped solution for the original LP pair
/// (`A x >= b`, `A^T y <= c`), with relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralCheck {
    pub primal: Feasibility,
    pub dual: Feasibility,
}

pub fn check_general(g: &GeneralInstance, sol: &OriginalSolution, tol: f64) -> Result<GeneralCheck, VerifyError> {
    let a = g.matrix();
    dims("x", a.n_cols(), sol.x.len())?;
    dims("y", a.n_rows(), sol.y.len())?;

    let mut primal_ok = sol.x.iter().all(|v| v.finite().is_none_or(|x| x >= 0.0));
    let mut primal_slack: Option<f64> = None;
    for (i, &b) in g.b().iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        let saturated = a.row(i).iter().any(|&(j, _)| sol.x[j] == PrimalValue::Saturated);
        if saturated {
            continue;
        }
        let lhs: f64 = a.row(i).iter().map(|&(j, v)| v * sol.x[j].finite().unwrap_or(0.0)).sum();
        let slack = (lhs - b) / b;
        primal_ok &= slack >= -tol;
        primal_slack = Some(primal_slack.map_or(slack, |s| s.min(slack)));
    }

    let mut dual_ok = sol.y.iter().all(|&y| y >= 0.0);
    let mut dual_slack: Option<f64> = None;
    for (j, &c) in g.c().iter().enumerate() {
        let lhs: f64 = a.col(j).iter().map(|&(i, v)| v * sol.y[i]).sum();
        let slack = if c > 0.0 { (c - lhs) / c } else { -lhs };
        dual_ok &= slack >= -tol;
        dual_slack = Some(dual_slack.map_or(slack, |s| s.min(slack)));
    }
    Ok(GeneralCheck {
        primal: Feasibility { feasible: primal_ok, worst_slack: primal_slack },
        dual: Feasibility { feasible: dual_ok, worst_slack: dual_slack },
    })
}
