//! Solver output: the matching found, its cost under the requested
//! objective, whether that cost is certified optimal, and search statistics.

use crate::matching::Matching;
use crate::stability::Objective;

/// Counters filled by the solvers; fields irrelevant to a given solver stay
/// zero (or `None`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Branch-and-bound / enumeration: assignments tried.
    pub nodes_explored: u64,
    /// Local search steps or evolution rounds executed.
    pub steps: u64,
    /// Random restarts taken.
    pub restarts: u64,
    pub elapsed_ms: u64,
    /// Hill-climber only: evaluation of the best matching before it was
    /// stabilized.
    pub raw_eval: Option<i64>,
    /// Hill-climber only: evaluation of the returned (stabilized) matching.
    pub stabilized_eval: Option<i64>,
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub matching: Matching,
    pub objective: Objective,
    pub cost: i64,
    /// True iff `cost` is certified to be the optimum over all weakly stable
    /// matchings of the instance.
    pub optimal: bool,
    pub stats: SearchStats,
}
