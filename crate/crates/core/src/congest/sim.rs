//! Lock-step synchronous message-passing scheduler.
//!
//! A round is: every node (ascending id) queues messages to neighbors, all
//! messages are delivered at the round boundary, then every node processes
//! its inbox. Inboxes are ordered by sender id. Node programs only ever see
//! their own state and their inbox.

use serde::Serialize;

use crate::error::SimError;

pub type NodeId = usize;

/// Default per-message bandwidth budget in bits.
pub const DEFAULT_BIT_BUDGET: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tag {
    /// Requirement exponent of an element.
    Req,
    /// Efficiency of a set.
    Rho,
    /// Max efficiency seen by an element.
    Max,
    /// Selection announcement carrying the set's efficiency.
    Selected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub from: NodeId,
    pub tag: Tag,
    pub value: f64,
}

impl Message {
    pub const TAG_BITS: u32 = 2;
    pub const VALUE_BITS: u32 = 64;

    pub fn bits(&self) -> u32 {
        Self::TAG_BITS + Self::VALUE_BITS
    }
}

/// Outgoing messages of one node for one round.
pub struct Outbox<'a> {
    from: NodeId,
    round: u64,
    neighbors: &'a [NodeId],
    used: &'a mut Vec<bool>,
    queued: &'a mut Vec<(NodeId, Message)>,
}

impl<'a> Outbox<'a> {
    fn new(
        from: NodeId,
        round: u64,
        neighbors: &'a [NodeId],
        used: &'a mut Vec<bool>,
        queued: &'a mut Vec<(NodeId, Message)>,
    ) -> Self {
        used.clear();
        used.resize(neighbors.len(), false);
        queued.clear();
        Self { from, round, neighbors, used, queued }
    }

    pub fn neighbors(&self) -> &[NodeId] {
        self.neighbors
    }

    /// Queues one message; at most one per neighbor per round.
    pub fn send(&mut self, to: NodeId, tag: Tag, value: f64) -> Result<(), SimError> {
        let Ok(k) = self.neighbors.binary_search(&to) else {
            return Err(SimError::NotNeighbor { from: self.from, to, round: self.round });
        };
        if std::mem::replace(&mut self.used[k], true) {
            return Err(SimError::DuplicateSend { from: self.from, to, round: self.round });
        }
        self.queued.push((to, Message { from: self.from, tag, value }));
        Ok(())
    }

    pub fn broadcast(&mut self, tag: Tag, value: f64) -> Result<(), SimError> {
        for k in 0..self.neighbors.len() {
            self.send(self.neighbors[k], tag, value)?;
        }
        Ok(())
    }
}

pub trait NodeProgram {
    fn send(&mut self, round: u64, out: &mut Outbox<'_>) -> Result<(), SimError>;
    fn receive(&mut self, round: u64, inbox: &[Message]);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrafficStats {
    pub rounds: u64,
    pub messages: u64,
    pub total_bits: u64,
    pub max_message_bits: u32,
}

pub struct Simulator<N> {
    nodes: Vec<N>,
    adjacency: Vec<Vec<NodeId>>,
    bit_budget: u32,
    stats: TrafficStats,
    inboxes: Vec<Vec<Message>>,
    used: Vec<bool>,
    queued: Vec<(NodeId, Message)>,
}

impl<N: NodeProgram> Simulator<N> {
    /// `adjacency[v]` lists the neighbors of node `v`; it is sorted here.
    pub fn new(nodes: Vec<N>, mut adjacency: Vec<Vec<NodeId>>, bit_budget: u32) -> Self {
        assert_eq!(nodes.len(), adjacency.len(), "one adjacency list per node");
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let inboxes = vec![Vec::new(); nodes.len()];
        Self {
            nodes,
            adjacency,
            bit_budget,
            stats: TrafficStats::default(),
            inboxes,
            used: Vec::new(),
            queued: Vec::new(),
        }
    }

    pub fn round(&self) -> u64 {
        self.stats.rounds
    }

    pub fn stats(&self) -> TrafficStats {
        self.stats
    }

    pub fn bit_budget(&self) -> u32 {
        self.bit_budget
    }

    pub fn nodes(&self) -> &[N] {
        &self.nodes
    }

    /// Direct state access for observers and fault-injection tests. Node
    /// programs never get this.
    pub fn nodes_mut(&mut self) -> &mut [N] {
        &mut self.nodes
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    /// Executes one round.
    pub fn step(&mut self) -> Result<TrafficStats, SimError> {
        let round = self.stats.rounds;
        for inbox in &mut self.inboxes {
            inbox.clear();
        }
        let mut this_round = TrafficStats { rounds: 1, ..TrafficStats::default() };
        for (id, node) in self.nodes.iter_mut().enumerate() {
            let mut out = Outbox::new(id, round, &self.adjacency[id], &mut self.used, &mut self.queued);
            node.send(round, &mut out)?;
            for &(to, msg) in self.queued.iter() {
                let bits = msg.bits();
                if bits > self.bit_budget {
                    return Err(SimError::OverBudget { from: id, bits, budget: self.bit_budget });
                }
                this_round.messages += 1;
                this_round.total_bits += u64::from(bits);
                this_round.max_message_bits = this_round.max_message_bits.max(bits);
                self.inboxes[to].push(msg);
            }
        }
        // Senders run in ascending order, so this is a no-op kept as a guard.
        for inbox in &mut self.inboxes {
            inbox.sort_by_key(|m| m.from);
        }
        for (node, inbox) in self.nodes.iter_mut().zip(&self.inboxes) {
            node.receive(round, inbox);
        }
        self.stats.rounds += 1;
        self.stats.messages += this_round.messages;
        self.stats.total_bits += this_round.total_bits;
        self.stats.max_message_bits = self.stats.max_message_bits.max(this_round.max_message_bits);
        Ok(this_round)
    }
}
