//! Error types, one enum per subsystem.

use thiserror::Error;

/// Errors produced while parsing or querying a seed tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed input at line {line}: {msg}")]
    MalformedInput { line: usize, msg: String },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("edge index {0} out of range")]
    InvalidEdge(usize),
}

/// Errors produced by automaton construction or word application.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MealyError {
    #[error("unknown state {0}")]
    UnknownState(u32),
    #[error("letter {0} outside alphabet 1..={1}")]
    InvalidLetter(u32, u32),
    #[error("inconsistent transition tables: {0}")]
    BadTables(String),
}

/// Errors produced by Schreier graph construction and decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchreierError {
    #[error("level must be at least 1")]
    InvalidLevel,
    #[error("level {n} needs {needed} vertices, above the cap of {cap}")]
    LevelTooLarge { n: u32, needed: u128, cap: u64 },
    #[error("state {0} is not an edge state (output is not a transposition)")]
    NotAnEdgeState(u32),
    #[error("a loop has no special edges")]
    LoopHasNoSpecialEdges,
    #[error("graph carries no generator metadata (imported from JSON?)")]
    MissingGenerators,
    #[error("invalid graph JSON: {0}")]
    InvalidJson(String),
}

/// Errors produced by the closed-form evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("result is not an integer: {0}")]
    NonIntegerResult(String),
    #[error("value too large: {0}")]
    ValueTooLarge(String),
    #[error("tree has no perfect matching")]
    NoPerfectMatching,
    #[error("edge index {0} out of range")]
    InvalidEdge(usize),
    #[error("index {i} outside valid range {lo}..{hi}")]
    InvalidRange { i: u32, lo: u32, hi: u32 },
}

/// Errors produced by the brute-force oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph too large for this oracle: {size} > {limit} {what}")]
    GraphTooLarge {
        what: &'static str,
        size: u64,
        limit: u64,
    },
    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("graph is not a cactus whose blocks are all cycles: {0}")]
    NotACactusOfCycles(String),
}
