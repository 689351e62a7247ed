//! Stable marriage with ties and incomplete preference lists.
//!
//! Each of `n` men and `n` women ranks an arbitrary subset of the opposite
//! side, with ties allowed; a matching is weakly stable when no mutually
//! acceptable pair strictly prefers deviating together. This crate models
//! such instances and provides:
//!
//! * [`instance`] / [`matching`] — the domain types;
//! * [`stability`] — blocking-pair detection, dominance, and the
//!   max-cardinality / egalitarian / sex-equal cost functions;
//! * [`gen`] — a seeded random instance generator over size `n`,
//!   incompleteness probability `p1`, and tie probability `p2`;
//! * [`heuristics`] — deferred acceptance with random tie-breaking, a
//!   random-restart stochastic hill-climber, and a genetic algorithm for
//!   the max-cardinality variant;
//! * [`exact`] — an exhaustive oracle for tiny instances and a
//!   branch-and-bound optimizer for all three objectives;
//! * [`encode`] — parsers and emitters for the native text formats plus
//!   ASP and LP renderings of an instance.
//!
//! All randomized components take explicit 64-bit seeds and reproduce their
//! output bit-for-bit across platforms; see [`rng`].
//!
//! ```
//! use smti_core::exact::branch_and_bound;
//! use smti_core::gen::{generate, GenParams};
//! use smti_core::heuristics::deferred_acceptance;
//! use smti_core::stability::{is_stable, Objective};
//!
//! let inst = generate(&GenParams { n: 8, p1: 0.3, p2: 0.5, seed: 1 }).unwrap();
//! let quick = deferred_acceptance(&inst, 7);
//! assert!(is_stable(&inst, &quick));
//!
//! let best = branch_and_bound(&inst, Objective::MaxCardinality, 0);
//! assert!(best.optimal);
//! assert!(best.cost >= quick.matched_count() as i64);
//! ```

pub mod encode;
pub mod exact;
pub mod gen;
pub mod heuristics;
pub mod instance;
pub mod matching;
pub mod report;
pub mod rng;
pub mod stability;

pub use instance::{AgentId, Instance, InstanceError, Side};
pub use matching::{Matching, MatchingError};
pub use report::{SearchStats, SolveReport};
pub use stability::{BlockingCase, BlockingPair, Objective};
