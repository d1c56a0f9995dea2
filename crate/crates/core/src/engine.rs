//! Centralized reference solver.
//!
//! Every phase picks all sets whose efficiency is within a factor `alpha` of
//! the best efficiency among sets sharing an element with them, raises their
//! primal value by one, spreads that unit over their live elements as dual
//! increments, and shrinks each element's requirement by `alpha^A`.
//!
//! Requirements are kept in exponent form: element `e` stores
//! `s_e = sum of A_eS over every selection of a set containing e`, so the
//! requirement is `alpha^(-s_e)` and truncation (`r_e <= alpha^(-f)`) is the
//! exact test `s_e >= f`. All loops run in ascending index order; the output
//! is a deterministic function of the input.

use serde::Serialize;

use crate::error::EngineError;
use crate::instances::{NormalizedInstance, PrimalDualSolution};

/// Initial value of the constant `c` in `alpha = 1 + eps / (c * gamma_d)`.
pub const INITIAL_C: f64 = 4.0;
const MAX_C: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    pub epsilon: f64,
    pub alpha: f64,
    pub f: f64,
    /// Phase budget `ceil(log_alpha gamma_p + f)`.
    pub phase_limit: u64,
    pub c_const: f64,
    /// Max column sum used by the formulas (at least 1).
    pub gamma_p: f64,
    /// Max row sum used by the formulas (at least 1).
    pub gamma_d: f64,
}

impl Params {
    /// Evaluates the parameter formulas for a fixed constant `c`, without
    /// escalation.
    pub fn with_constant(epsilon: f64, gamma_p: f64, gamma_d: f64, c_const: f64) -> Result<Self, EngineError> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(EngineError::InvalidEpsilon(epsilon));
        }
        let gamma_p = gamma_p.max(1.0);
        let gamma_d = gamma_d.max(1.0);
        let alpha = 1.0 + epsilon / (c_const * gamma_d);
        let ln_alpha = alpha.ln();
        let f = (2.0 * gamma_p.ln() / (epsilon * ln_alpha)).max(1.0);
        let phase_limit = (gamma_p.ln() / ln_alpha + f).ceil() as u64;
        Ok(Self { epsilon, alpha, f, phase_limit, c_const, gamma_p, gamma_d })
    }

    /// The inequality the dual-load argument ends with:
    /// `alpha^(gd+1) f + alpha^(gd+1) ln(gp) / ln(alpha) <= (1 + eps) f`.
    pub fn load_bound_holds(&self) -> bool {
        let g = self.alpha.powf(self.gamma_d + 1.0);
        g * self.f + g * self.gamma_p.ln() / self.alpha.ln() <= (1.0 + self.epsilon) * self.f
    }

    /// `alpha^(-s)`, the requirement of an element with exponent `s`.
    pub fn requirement(&self, s: f64) -> f64 {
        self.alpha.powf(-s)
    }

    /// Divisor applied to the raw dual vector on output.
    pub fn dual_scale(&self) -> f64 {
        (1.0 + self.epsilon) * self.f
    }
}

/// Chooses `alpha`, `f` and `L` for `inst`, starting from `c = 4` and
/// doubling `c` until [`Params::load_bound_holds`].
pub fn setup_params(epsilon: f64, inst: &NormalizedInstance) -> Result<Params, EngineError> {
    let stats = inst.stats();
    let mut c = INITIAL_C;
    loop {
        let params = Params::with_constant(epsilon, stats.gamma_p, stats.gamma_d, c)?;
        if params.load_bound_holds() {
            return Ok(params);
        }
        c *= 2.0;
        if c > MAX_C {
            return Err(EngineError::EscalationDiverged(c));
        }
    }
}

/// Raw algorithm state between phases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverState {
    /// Times each set was selected.
    pub x: Vec<u64>,
    pub y: Vec<f64>,
    /// Requirement exponents.
    pub s: Vec<f64>,
    pub dead: Vec<bool>,
    pub phase_index: u64,
}

impl SolverState {
    pub fn new(inst: &NormalizedInstance) -> Self {
        Self {
            x: vec![0; inst.n_cols()],
            y: vec![0.0; inst.n_rows()],
            s: vec![0.0; inst.n_rows()],
            dead: vec![false; inst.n_rows()],
            phase_index: 0,
        }
    }

    /// Requirement of every element, 0 for dead ones.
    pub fn requirements(&self, params: &Params) -> Vec<f64> {
        self.s
            .iter()
            .zip(&self.dead)
            .map(|(&s, &dead)| if dead { 0.0 } else { params.requirement(s) })
            .collect()
    }

    pub fn all_dead(&self) -> bool {
        self.dead.iter().all(|&d| d)
    }
}

/// One phase as observed from outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRecord {
    /// 1-based.
    pub phase: u64,
    pub selected: Vec<usize>,
    /// `(set, rho)` for every set with positive efficiency before the phase.
    pub rho_before: Vec<(usize, f64)>,
    /// `(element, dual increment)` for every live element that was hit.
    pub delta_y: Vec<(usize, f64)>,
    /// `(set, Y_S)` after the phase, for every set whose load changed.
    pub load_after: Vec<(usize, f64)>,
    pub newly_dead: Vec<usize>,
    /// Simulator rounds spent on this phase (0 when run centrally).
    pub rounds: u64,
    pub messages: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTrace {
    pub records: Vec<PhaseRecord>,
    pub final_state: SolverState,
}

impl PhaseTrace {
    pub fn phases(&self) -> u64 {
        self.records.len() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub solution: PrimalDualSolution,
    pub trace: PhaseTrace,
    pub params: Params,
}

fn efficiencies(state: &SolverState, inst: &NormalizedInstance, r: &[f64]) -> Vec<f64> {
    let a = inst.matrix();
    (0..a.n_cols())
        .map(|j| {
            a.col(j)
                .iter()
                .filter(|&&(e, _)| !state.dead[e])
                .map(|&(e, v)| v * r[e])
                .sum()
        })
        .collect()
}

/// Efficiency of set `set`: sum of `A_eS * r_e` over its live elements.
pub fn rho(state: &SolverState, inst: &NormalizedInstance, params: &Params, set: usize) -> f64 {
    inst.matrix()
        .col(set)
        .iter()
        .filter(|&&(e, _)| !state.dead[e])
        .map(|&(e, v)| v * params.requirement(state.s[e]))
        .sum()
}

/// Max efficiency over the sets sharing an element with each set
/// (the set itself included), via a per-element max.
pub fn neighborhood_max(inst: &NormalizedInstance, rho: &[f64]) -> Vec<f64> {
    let a = inst.matrix();
    let per_element: Vec<f64> = (0..a.n_rows())
        .map(|e| a.row(e).iter().map(|&(s, _)| rho[s]).fold(0.0, f64::max))
        .collect();
    (0..a.n_cols())
        .map(|s| a.col(s).iter().map(|&(e, _)| per_element[e]).fold(0.0, f64::max))
        .collect()
}

/// The selection rule: `rho_S > 0` and `rho_S >= M_S / alpha`.
pub fn is_selected(rho: f64, neighborhood_max: f64, alpha: f64) -> bool {
    rho > 0.0 && rho >= neighborhood_max / alpha
}

fn select_from(inst: &NormalizedInstance, params: &Params, rho: &[f64]) -> Vec<usize> {
    let max = neighborhood_max(inst, rho);
    (0..rho.len())
        .filter(|&s| is_selected(rho[s], max[s], params.alpha))
        .collect()
}

/// Sets selected in the next phase, ascending.
pub fn select(state: &SolverState, inst: &NormalizedInstance, params: &Params) -> Vec<usize> {
    let r = state.requirements(params);
    select_from(inst, params, &efficiencies(state, inst, &r))
}

/// Executes one phase for the given selection.
pub fn apply_phase(
    state: &mut SolverState,
    inst: &NormalizedInstance,
    params: &Params,
    selected: &[usize],
) -> Result<PhaseRecord, EngineError> {
    let r = state.requirements(params);
    let rho = efficiencies(state, inst, &r);
    apply_with(state, inst, params, selected, &r, &rho)
}

fn apply_with(
    state: &mut SolverState,
    inst: &NormalizedInstance,
    params: &Params,
    selected: &[usize],
    r: &[f64],
    rho: &[f64],
) -> Result<PhaseRecord, EngineError> {
    let a = inst.matrix();
    let mut chosen = vec![false; a.n_cols()];
    for &s in selected {
        if s >= a.n_cols() {
            return Err(EngineError::UnknownSet(s));
        }
        if rho[s] <= 0.0 {
            return Err(EngineError::ZeroEfficiencySelected(s));
        }
        chosen[s] = true;
    }
    let mut selected: Vec<usize> = selected.to_vec();
    selected.sort_unstable();
    selected.dedup();

    let rho_before = rho.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(s, &p)| (s, p)).collect();

    for &s in &selected {
        state.x[s] += 1;
    }
    let mut delta_y = Vec::new();
    let mut newly_dead = Vec::new();
    let mut touched_sets = vec![false; a.n_cols()];
    for e in 0..a.n_rows() {
        if state.dead[e] {
            continue;
        }
        let mut dy = 0.0;
        let mut ds = 0.0;
        let mut hit = false;
        for &(s, v) in a.row(e) {
            if chosen[s] {
                dy += element_share(v, r[e], rho[s]);
                ds += v;
                hit = true;
            }
        }
        if !hit {
            continue;
        }
        state.y[e] += dy;
        state.s[e] += ds;
        delta_y.push((e, dy));
        if state.s[e] >= params.f {
            state.dead[e] = true;
            newly_dead.push(e);
        }
        for &(s, _) in a.row(e) {
            touched_sets[s] = true;
        }
    }
    let load_after = (0..a.n_cols())
        .filter(|&s| touched_sets[s])
        .map(|s| (s, set_load(inst, &state.y, s)))
        .collect();
    state.phase_index += 1;
    Ok(PhaseRecord {
        phase: state.phase_index,
        selected,
        rho_before,
        delta_y,
        load_after,
        newly_dead,
        rounds: 0,
        messages: 0,
    })
}

/// Dual increment an element receives from one selected set.
pub fn element_share(a_es: f64, requirement: f64, rho: f64) -> f64 {
    a_es * requirement / rho
}

/// `Y_S = sum over e in S of A_eS * y_e`.
pub fn set_load(inst: &NormalizedInstance, y: &[f64], set: usize) -> f64 {
    inst.matrix().col(set).iter().map(|&(e, v)| v * y[e]).sum()
}

/// Scales raw counts and duals into the returned primal/dual pair:
/// `x / f` and `y / ((1 + eps) f)`.
pub fn finalize(x: &[u64], y: &[f64], params: &Params) -> PrimalDualSolution {
    let dual_scale = params.dual_scale();
    PrimalDualSolution::new(
        x.iter().map(|&c| c as f64 / params.f).collect(),
        y.iter().map(|&v| v / dual_scale).collect(),
    )
}

/// Runs the solver to completion: at most `L` phases, stopping once every
/// efficiency is zero.
pub fn run(inst: &NormalizedInstance, epsilon: f64) -> Result<RunOutput, EngineError> {
    let params = setup_params(epsilon, inst)?;
    let mut state = SolverState::new(inst);
    let mut records = Vec::new();
    while state.phase_index < params.phase_limit {
        let r = state.requirements(&params);
        let rho = efficiencies(&state, inst, &r);
        if rho.iter().all(|&p| p == 0.0) {
            break;
        }
        let selected = select_from(inst, &params, &rho);
        records.push(apply_with(&mut state, inst, &params, &selected, &r, &rho)?);
    }
    let solution = finalize(&state.x, &state.y, &params);
    Ok(RunOutput { solution, trace: PhaseTrace { records, final_state: state }, params })
}
