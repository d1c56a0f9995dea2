//! CONGEST-model execution of the solver on the bipartite constraint graph.
//!
//! Left nodes are sets (primal variables), right nodes are elements (dual
//! variables); there is an edge exactly where `A_eS > 0`, labeled with that
//! value. Each phase takes [`ROUNDS_PER_PHASE`] rounds and reproduces the
//! centralized engine bit for bit.

mod protocol;
mod sim;

use serde::Serialize;

pub use protocol::{CoverNode, ElementNode, SetNode, ROUNDS_PER_PHASE};
pub use sim::{Message, NodeId, NodeProgram, Outbox, Simulator, Tag, TrafficStats, DEFAULT_BIT_BUDGET};

use crate::engine::{finalize, set_load, setup_params, Params, PhaseRecord, PhaseTrace, SolverState};
use crate::error::SimError;
use crate::instances::{NormalizedInstance, PrimalDualSolution};

/// Round and traffic report of a distributed run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundStats {
    pub phases: u64,
    pub rounds: u64,
    pub rounds_per_phase: u64,
    pub messages: u64,
    pub total_bits: u64,
    pub max_message_bits: u32,
    pub bit_budget: u32,
    /// `L = ceil(log_alpha gamma_p + f)`.
    pub phase_limit: u64,
    /// `4 L`.
    pub round_bound: u64,
    pub gamma_p: f64,
    pub gamma_d: f64,
    pub a_max: f64,
    pub alpha: f64,
    pub f: f64,
    pub c_const: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributedOutput {
    pub solution: PrimalDualSolution,
    pub trace: PhaseTrace,
    pub params: Params,
    pub stats: RoundStats,
}

/// The network plus an external observer that assembles phase records.
pub struct CongestNetwork<'a> {
    inst: &'a NormalizedInstance,
    params: Params,
    sim: Simulator<CoverNode>,
    records: Vec<PhaseRecord>,
}

/// Builds the bipartite network. Set `j` is node `j`, element `e` is node
/// `n_cols + e`; each node starts out knowing only its own column or row.
pub fn build_network(inst: &NormalizedInstance, params: Params) -> CongestNetwork<'_> {
    build_network_with_budget(inst, params, DEFAULT_BIT_BUDGET)
}

pub fn build_network_with_budget(inst: &NormalizedInstance, params: Params, bit_budget: u32) -> CongestNetwork<'_> {
    let a = inst.matrix();
    let m = a.n_cols();
    let mut nodes = Vec::with_capacity(m + a.n_rows());
    let mut adjacency = Vec::with_capacity(m + a.n_rows());
    for j in 0..m {
        let edges: Vec<(NodeId, f64)> = a.col(j).iter().map(|&(e, v)| (m + e, v)).collect();
        adjacency.push(edges.iter().map(|&(v, _)| v).collect());
        nodes.push(CoverNode::Set(SetNode::new(params, edges)));
    }
    for e in 0..a.n_rows() {
        let edges: Vec<(NodeId, f64)> = a.row(e).to_vec();
        adjacency.push(edges.iter().map(|&(v, _)| v).collect());
        nodes.push(CoverNode::Element(ElementNode::new(params, edges)));
    }
    CongestNetwork { inst, params, sim: Simulator::new(nodes, adjacency, bit_budget), records: Vec::new() }
}

impl<'a> CongestNetwork<'a> {
    pub fn n_left(&self) -> usize {
        self.inst.n_cols()
    }

    pub fn n_right(&self) -> usize {
        self.inst.n_rows()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n_left()).map(|j| self.sim.neighbors(j).len()).sum()
    }

    /// `(set, element, A_eS)` for every edge, as known to the set endpoint.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let m = self.n_left();
        self.set_nodes()
            .enumerate()
            .flat_map(|(j, n)| n.edges().iter().map(move |&(v, a)| (j, v - m, a)))
            .collect()
    }

    pub fn simulator(&self) -> &Simulator<CoverNode> {
        &self.sim
    }

    /// Fault-injection access to node state.
    pub fn simulator_mut(&mut self) -> &mut Simulator<CoverNode> {
        &mut self.sim
    }

    pub fn set_nodes(&self) -> impl Iterator<Item = &SetNode> {
        self.sim.nodes().iter().filter_map(|n| match n {
            CoverNode::Set(s) => Some(s),
            CoverNode::Element(_) => None,
        })
    }

    pub fn element_nodes(&self) -> impl Iterator<Item = &ElementNode> {
        self.sim.nodes().iter().filter_map(|n| match n {
            CoverNode::Element(e) => Some(e),
            CoverNode::Set(_) => None,
        })
    }

    pub fn phases(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn all_dead(&self) -> bool {
        self.element_nodes().all(|e| e.dead)
    }

    /// Runs the four rounds of one phase and records what happened.
    pub fn run_phase_protocol(&mut self) -> Result<&PhaseRecord, SimError> {
        let before = self.sim.stats();
        let mut rounds = 0;
        while rounds < ROUNDS_PER_PHASE {
            self.sim.step()?;
            rounds += 1;
        }
        let after = self.sim.stats();
        let record = self.observe(after.rounds - before.rounds, after.messages - before.messages);
        self.records.push(record);
        Ok(self.records.last().expect("just pushed"))
    }

    fn observe(&self, rounds: u64, messages: u64) -> PhaseRecord {
        let sets: Vec<&SetNode> = self.set_nodes().collect();
        let elements: Vec<&ElementNode> = self.element_nodes().collect();
        let y: Vec<f64> = elements.iter().map(|e| e.y).collect();
        let mut touched = vec![false; sets.len()];
        let mut delta_y = Vec::new();
        for (e, node) in elements.iter().enumerate() {
            if let Some(dy) = node.last_delta {
                delta_y.push((e, dy));
                for &(s, _) in node.edges() {
                    touched[s] = true;
                }
            }
        }
        PhaseRecord {
            phase: self.records.len() as u64 + 1,
            selected: (0..sets.len()).filter(|&j| sets[j].selected).collect(),
            rho_before: (0..sets.len()).filter(|&j| sets[j].rho > 0.0).map(|j| (j, sets[j].rho)).collect(),
            delta_y,
            load_after: (0..sets.len())
                .filter(|&j| touched[j])
                .map(|j| (j, set_load(self.inst, &y, j)))
                .collect(),
            newly_dead: (0..elements.len()).filter(|&e| elements[e].died_last_phase).collect(),
            rounds,
            messages,
        }
    }

    /// Phases until every element is dead or `L` phases have run.
    pub fn run_to_completion(&mut self) -> Result<(), SimError> {
        while self.phases() < self.params.phase_limit && !self.all_dead() {
            self.run_phase_protocol()?;
        }
        Ok(())
    }

    pub fn state(&self) -> SolverState {
        let elements: Vec<&ElementNode> = self.element_nodes().collect();
        SolverState {
            x: self.set_nodes().map(|s| s.x).collect(),
            y: elements.iter().map(|e| e.y).collect(),
            s: elements.iter().map(|e| e.s).collect(),
            dead: elements.iter().map(|e| e.dead).collect(),
            phase_index: self.phases(),
        }
    }

    pub fn round_stats(&self) -> RoundStats {
        let traffic = self.sim.stats();
        let stats = self.inst.stats();
        RoundStats {
            phases: self.phases(),
            rounds: traffic.rounds,
            rounds_per_phase: ROUNDS_PER_PHASE,
            messages: traffic.messages,
            total_bits: traffic.total_bits,
            max_message_bits: traffic.max_message_bits,
            bit_budget: self.sim.bit_budget(),
            phase_limit: self.params.phase_limit,
            round_bound: ROUNDS_PER_PHASE * self.params.phase_limit,
            gamma_p: stats.gamma_p,
            gamma_d: stats.gamma_d,
            a_max: stats.a_max,
            alpha: self.params.alpha,
            f: self.params.f,
            c_const: self.params.c_const,
            epsilon: self.params.epsilon,
        }
    }

    pub fn into_output(self) -> DistributedOutput {
        let state = self.state();
        let stats = self.round_stats();
        DistributedOutput {
            solution: finalize(&state.x, &state.y, &self.params),
            trace: PhaseTrace { records: self.records, final_state: state },
            params: self.params,
            stats,
        }
    }
}

pub fn run_distributed(inst: &NormalizedInstance, epsilon: f64) -> Result<DistributedOutput, SimError> {
    run_distributed_with_budget(inst, epsilon, DEFAULT_BIT_BUDGET)
}

pub fn run_distributed_with_budget(
    inst: &NormalizedInstance,
    epsilon: f64,
    bit_budget: u32,
) -> Result<DistributedOutput, SimError> {
    let params = setup_params(epsilon, inst)?;
    let mut net = build_network_with_budget(inst, params, bit_budget);
    net.run_to_completion()?;
    Ok(net.into_output())
}
