//! Heuristic solvers: deferred acceptance with seeded tie-breaking, the
//! LTIU random-restart stochastic hill-climber, and a genetic algorithm
//! whose chromosomes are stable matchings. The hill-climber and the GA
//! target the max-cardinality variant.

mod da;
mod ga;
mod ltiu;

pub use da::deferred_acceptance;
pub(crate) use da::deferred_acceptance_index_order;
pub use ga::{ga_solve, mutate_pareto, GaParams};
pub use ltiu::{ltiu_solve, random_matching, LtiuParams};

use thiserror::Error;

use crate::instance::Instance;
use crate::matching::Matching;
use crate::stability::{is_blocking, BlockingPair};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeuristicsError {
    #[error("pair (man {man}, woman {woman}) does not block the given matching")]
    NotBlocking { man: usize, woman: usize },
}

/// The neighborhood move of the hill-climber: satisfy a blocking pair by
/// marrying it. The pair's former partners (if any) become single; everyone
/// else keeps their partner, and the moved pair can no longer block.
pub fn apply_blocking_pair(
    inst: &Instance,
    mu: &Matching,
    bp: &BlockingPair,
) -> Result<Matching, HeuristicsError> {
    if is_blocking(inst, mu, bp.man, bp.woman).is_none() {
        return Err(HeuristicsError::NotBlocking {
            man: bp.man,
            woman: bp.woman,
        });
    }
    let mut next = mu.clone();
    next.match_pair(inst, bp.man, bp.woman)
        .expect("a blocking pair is mutually acceptable");
    Ok(next)
}
