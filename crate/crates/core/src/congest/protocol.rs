//! Node programs for one phase, realized in four rounds:
//!
//! | round | senders          | payload         | receivers compute                 |
//! |-------|------------------|-----------------|-----------------------------------|
//! | 1     | live elements    | `s_e`           | sets: `rho_S`                     |
//! | 2     | sets, `rho > 0`  | `rho_S`         | elements: `mu_e = max rho`        |
//! | 3     | elements, `mu>0` | `mu_e`          | sets: `M_S = max mu`, select, x++ |
//! | 4     | selected sets    | `rho_S`         | live elements: y, s, death        |

use super::sim::{Message, NodeId, NodeProgram, Outbox, Tag};
use crate::engine::{element_share, is_selected, Params};
use crate::error::SimError;

pub const ROUNDS_PER_PHASE: u64 = 4;

fn weight(edges: &[(NodeId, f64)], from: NodeId) -> f64 {
    let k = edges
        .binary_search_by_key(&from, |&(v, _)| v)
        .expect("messages only arrive over edges");
    edges[k].1
}

/// Left node: owns `x_S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetNode {
    pub(crate) params: Params,
    /// `(element node, A_eS)`, ascending.
    pub(crate) edges: Vec<(NodeId, f64)>,
    pub x: u64,
    pub rho: f64,
    pub selected: bool,
    /// Elements that announced a requirement this phase.
    live: Vec<NodeId>,
}

impl SetNode {
    pub(crate) fn new(params: Params, edges: Vec<(NodeId, f64)>) -> Self {
        Self { params, edges, x: 0, rho: 0.0, selected: false, live: Vec::new() }
    }

    pub fn edges(&self) -> &[(NodeId, f64)] {
        &self.edges
    }

    fn send(&mut self, step: u64, out: &mut Outbox<'_>) -> Result<(), SimError> {
        match step {
            1 if self.rho > 0.0 => out.broadcast(Tag::Rho, self.rho),
            3 if self.selected => {
                for &e in &self.live {
                    out.send(e, Tag::Selected, self.rho)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn receive(&mut self, step: u64, inbox: &[Message]) {
        match step {
            0 => {
                self.selected = false;
                self.live.clear();
                self.live.extend(inbox.iter().map(|m| m.from));
                self.rho = inbox
                    .iter()
                    .map(|m| weight(&self.edges, m.from) * self.params.requirement(m.value))
                    .sum();
            }
            2 => {
                let max = inbox.iter().map(|m| m.value).fold(0.0, f64::max);
                self.selected = is_selected(self.rho, max, self.params.alpha);
                if self.selected {
                    self.x += 1;
                }
            }
            _ => {}
        }
    }
}

/// Right node: owns `y_e` and the requirement exponent `s_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementNode {
    pub(crate) params: Params,
    /// `(set node, A_eS)`, ascending.
    pub(crate) edges: Vec<(NodeId, f64)>,
    pub s: f64,
    pub y: f64,
    pub dead: bool,
    pub mu: f64,
    /// Dual increment of the most recent phase, if the element was hit.
    pub last_delta: Option<f64>,
    pub died_last_phase: bool,
}

impl ElementNode {
    pub(crate) fn new(params: Params, edges: Vec<(NodeId, f64)>) -> Self {
        Self { params, edges, s: 0.0, y: 0.0, dead: false, mu: 0.0, last_delta: None, died_last_phase: false }
    }

    pub fn edges(&self) -> &[(NodeId, f64)] {
        &self.edges
    }

    fn send(&mut self, step: u64, out: &mut Outbox<'_>) -> Result<(), SimError> {
        match step {
            0 if !self.dead => out.broadcast(Tag::Req, self.s),
            2 if self.mu > 0.0 => out.broadcast(Tag::Max, self.mu),
            _ => Ok(()),
        }
    }

    fn receive(&mut self, step: u64, inbox: &[Message]) {
        match step {
            0 => {
                self.last_delta = None;
                self.died_last_phase = false;
            }
            1 => self.mu = inbox.iter().map(|m| m.value).fold(0.0, f64::max),
            3 if !self.dead && !inbox.is_empty() => {
                let r = self.params.requirement(self.s);
                let mut dy = 0.0;
                let mut ds = 0.0;
                for m in inbox {
                    let a = weight(&self.edges, m.from);
                    dy += element_share(a, r, m.value);
                    ds += a;
                }
                self.y += dy;
                self.s += ds;
                self.last_delta = Some(dy);
                if self.s >= self.params.f {
                    self.dead = true;
                    self.died_last_phase = true;
                }
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverNode {
    Set(SetNode),
    Element(ElementNode),
}

impl NodeProgram for CoverNode {
    fn send(&mut self, round: u64, out: &mut Outbox<'_>) -> Result<(), SimError> {
        let step = round % ROUNDS_PER_PHASE;
        match self {
            CoverNode::Set(n) => n.send(step, out),
            CoverNode::Element(n) => n.send(step, out),
        }
    }

    fn receive(&mut self, round: u64, inbox: &[Message]) {
        let step = round % ROUNDS_PER_PHASE;
        match self {
            CoverNode::Set(n) => n.receive(step, inbox),
            CoverNode::Element(n) => n.receive(step, inbox),
        }
    }
}
