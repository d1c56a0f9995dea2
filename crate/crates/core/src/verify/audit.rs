//! Replays a phase trace and checks the invariants the analysis relies on.
//! Everything is recomputed from raw trace data; recorded summaries are not
//! trusted.

use serde::Serialize;

use crate::engine::{set_load, Params, PhaseTrace};
use crate::instances::NormalizedInstance;

const BALANCE_TOL: f64 = 1e-9;
const DECAY_TOL: f64 = 1e-9;
const RHO_TOL: f64 = 1e-12;
const LOAD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Phases, sets or elements at fault, depending on the check.
    pub offending: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
    pub passed: bool,
}

impl AuditReport {
    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &'static str, offending: Vec<usize>, detail: String) -> AuditCheck {
    AuditCheck { name, passed: offending.is_empty(), offending, detail }
}

pub fn audit_trace(trace: &PhaseTrace, params: &Params, inst: &NormalizedInstance) -> AuditReport {
    let a = inst.matrix();
    let (n, m) = (a.n_rows(), a.n_cols());
    let fin = &trace.final_state;
    let mut checks = Vec::new();

    let phases = trace.records.len() as u64;
    checks.push(check(
        "phase_bound",
        if phases <= params.phase_limit { vec![] } else { vec![phases as usize] },
        format!("{phases} phases, limit {}", params.phase_limit),
    ));

    // Sum of x equals sum of y after every phase and at the end.
    let mut bad = Vec::new();
    let (mut cum_x, mut cum_y) = (0.0f64, 0.0f64);
    for rec in &trace.records {
        cum_x += rec.selected.len() as f64;
        cum_y += rec.delta_y.iter().map(|&(_, d)| d).sum::<f64>();
        if (cum_x - cum_y).abs() > BALANCE_TOL * cum_x.max(1.0) {
            bad.push(rec.phase as usize);
        }
    }
    let final_x: f64 = fin.x.iter().map(|&c| c as f64).sum();
    let final_y: f64 = fin.y.iter().sum();
    if (final_x - final_y).abs() > BALANCE_TOL * final_x.max(1.0) || final_x != cum_x {
        bad.push(phases as usize + 1);
    }
    checks.push(check("sum_balance", bad, format!("final sum x = {final_x}, sum y = {final_y}")));

    let negative: Vec<usize> = trace
        .records
        .iter()
        .filter(|r| r.delta_y.iter().any(|&(_, d)| d.is_nan() || d < 0.0))
        .map(|r| r.phase as usize)
        .collect();
    checks.push(check("dual_increments_nonnegative", negative, String::new()));

    // Efficiencies per phase, dense, plus the final ones.
    let final_rho: Vec<f64> = (0..m)
        .map(|s| {
            a.col(s)
                .iter()
                .filter(|&&(e, _)| !fin.dead[e])
                .map(|&(e, v)| v * params.requirement(fin.s[e]))
                .sum()
        })
        .collect();

    let mut last: Vec<Option<f64>> = vec![None; m];
    let mut not_monotone = Vec::new();
    let mut out_of_range = Vec::new();
    let floor = (-params.f * params.alpha.ln()).exp();
    let mut maxima = Vec::with_capacity(trace.records.len() + 1);
    for rec in &trace.records {
        let mut current = vec![0.0; m];
        for &(s, p) in &rec.rho_before {
            current[s] = p;
        }
        check_rho_step(&mut last, &current, &mut not_monotone);
        for &(s, p) in &rec.rho_before {
            if p > params.gamma_p * (1.0 + RHO_TOL) || p <= floor * (1.0 - RHO_TOL) {
                out_of_range.push(s);
            }
        }
        maxima.push(current.iter().cloned().fold(0.0, f64::max));
    }
    check_rho_step(&mut last, &final_rho, &mut not_monotone);
    maxima.push(final_rho.iter().cloned().fold(0.0, f64::max));
    not_monotone.sort_unstable();
    not_monotone.dedup();
    out_of_range.sort_unstable();
    out_of_range.dedup();
    checks.push(check("rho_monotone", not_monotone, String::new()));
    checks.push(check(
        "rho_range",
        out_of_range,
        format!("nonzero efficiencies must lie in ({floor:e}, {}]", params.gamma_p),
    ));

    let slow: Vec<usize> = maxima
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] / params.alpha * (1.0 + DECAY_TOL))
        .map(|(k, _)| k + 1)
        .collect();
    checks.push(check("max_rho_decay", slow, format!("factor alpha = {}", params.alpha)));

    let live: Vec<usize> = (0..n).filter(|&e| !fin.dead[e]).collect();
    checks.push(check("terminal_all_dead", live, String::new()));

    let nonzero: Vec<usize> = (0..m).filter(|&s| final_rho[s] != 0.0).collect();
    checks.push(check("terminal_rho_zero", nonzero, String::new()));

    let uncovered: Vec<usize> = (0..n)
        .filter(|&e| {
            let load: f64 = a.row(e).iter().map(|&(s, v)| v * fin.x[s] as f64).sum();
            fin.s[e] < params.f || load < params.f
        })
        .collect();
    checks.push(check("exponent_coverage", uncovered, format!("f = {}", params.f)));

    let bound = params.dual_scale();
    let mut overloaded: Vec<usize> = (0..m)
        .filter(|&s| set_load(inst, &fin.y, s) > bound * (1.0 + LOAD_TOL))
        .collect();
    for rec in &trace.records {
        overloaded.extend(rec.load_after.iter().filter(|&&(_, y)| y > bound * (1.0 + LOAD_TOL)).map(|&(s, _)| s));
    }
    overloaded.sort_unstable();
    overloaded.dedup();
    let worst = (0..m).map(|s| set_load(inst, &fin.y, s)).fold(0.0, f64::max);
    checks.push(check(
        "dual_load",
        overloaded,
        format!("max Y_S = {worst}, bound (1+eps) f = {bound}"),
    ));

    let passed = checks.iter().all(|c| c.passed);
    AuditReport { checks, passed }
}

fn check_rho_step(last: &mut [Option<f64>], current: &[f64], bad: &mut Vec<usize>) {
    for (s, (prev, &now)) in last.iter_mut().zip(current).enumerate() {
        if let Some(p) = *prev {
            if now > p * (1.0 + RHO_TOL) {
                bad.push(s);
            }
        }
        *prev = Some(now);
    }
}
