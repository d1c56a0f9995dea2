use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("entry ({row}, {col}) outside a {n_rows}x{n_cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, n_rows: usize, n_cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("entry {value} at ({row}, {col}) is below 1 in a normalized instance")]
    EntryBelowOne { row: usize, col: usize, value: f64 },
    #[error("infeasible covering instance: row {row} has no entries")]
    InfeasibleCovering { row: usize },
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("invalid {what} value {value}")]
    InvalidVector { what: &'static str, value: f64 },
    #[error("invalid generator parameters: {0}")]
    InvalidParameter(String),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("element {0} is not covered by any set")]
    UncoveredElement(usize),
}

/// A parse failure with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),
    #[error("set {0} was selected with zero efficiency")]
    ZeroEfficiencySelected(usize),
    #[error("set index {0} out of range")]
    UnknownSet(usize),
    #[error("constant escalation did not satisfy the load bound (last c = {0})")]
    EscalationDiverged(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("node {from} sent to non-neighbor {to} in round {round}")]
    NotNeighbor { from: usize, to: usize, round: u64 },
    #[error("node {from} sent twice to {to} in round {round}")]
    DuplicateSend { from: usize, to: usize, round: u64 },
    #[error("message of {bits} bits from node {from} exceeds the {budget}-bit budget")]
    OverBudget { from: usize, bits: u32, budget: u32 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("{what} has length {got}, expected {expected}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("instance has {0} rows + columns, exact oracle is capped at {1}")]
    TooLarge(usize, usize),
}
