//! Random-restart stochastic hill-climbing over matchings (LTIU).
//!
//! The evaluation to minimize is singles + blocking pairs; a matching with
//! neither (evaluation zero) ends the search early. Neighbors of the current
//! matching satisfy one undominated blocking pair each. When the
//! neighborhood is empty the matching is stable (a local optimum): the best
//! seen is updated and the search restarts from a fresh random matching.
//! Otherwise, with probability `random_walk_p` a random neighbor is taken;
//! else a random minimum-evaluation neighbor when it strictly improves, and
//! a random neighbor when it does not.
//!
//! The best matching tracked this way may be unstable when the step budget
//! runs out, so the result is post-processed by repeatedly satisfying a
//! random undominated blocking pair (capped at n² moves; in the unlikely
//! event the walk has not settled by then, a seeded deferred-acceptance
//! matching is returned instead). The report carries the evaluation both
//! before and after this pass.

use std::time::Instant;

use crate::instance::Instance;
use crate::matching::Matching;
use crate::report::{SearchStats, SolveReport};
use crate::rng::Xoshiro256PlusPlus;
use crate::stability::{eval_ltiu, is_stable, undominated_blocking_pairs, Objective};

use super::{apply_blocking_pair, deferred_acceptance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtiuParams {
    /// Search step budget; every loop iteration (including restarts) counts.
    pub step_limit: u64,
    /// Probability of taking a random neighbor instead of a greedy one.
    pub random_walk_p: f64,
    pub seed: u64,
}

impl Default for LtiuParams {
    fn default() -> Self {
        LtiuParams {
            step_limit: 50_000,
            random_walk_p: 0.2,
            seed: 0,
        }
    }
}

/// A uniformly random permutation restricted to its mutually acceptable
/// pairs.
pub fn random_matching(inst: &Instance, rng: &mut Xoshiro256PlusPlus) -> Matching {
    let n = inst.n();
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    let mut mu = Matching::empty(n);
    for (m, &w) in perm.iter().enumerate() {
        if inst.acceptable(m, w) {
            mu.match_pair(inst, m, w).unwrap();
        }
    }
    mu
}

pub fn ltiu_solve(inst: &Instance, params: &LtiuParams) -> SolveReport {
    assert!(
        (0.0..=1.0).contains(&params.random_walk_p),
        "random_walk_p must lie in [0, 1]"
    );
    let start = Instant::now();
    let mut rng = Xoshiro256PlusPlus::new(params.seed);

    let mut current = random_matching(inst, &mut rng);
    let mut best = current.clone();
    let mut best_eval = eval_ltiu(inst, &best);
    let mut steps = 0u64;
    let mut restarts = 0u64;

    while steps < params.step_limit {
        // "Perfect" for the search means no singles and no blocking pairs,
        // i.e. evaluation zero; nothing can improve on that.
        if current.is_perfect() && is_stable(inst, &current) {
            best = current;
            best_eval = 0;
            break;
        }
        let candidates = undominated_blocking_pairs(inst, &current);
        if candidates.is_empty() {
            // Stable local optimum: record if better, restart.
            let current_eval = eval_ltiu(inst, &current);
            if current_eval < best_eval {
                best = current.clone();
                best_eval = current_eval;
            }
            current = random_matching(inst, &mut rng);
            restarts += 1;
        } else {
            let neighbors: Vec<Matching> = candidates
                .iter()
                .map(|bp| {
                    apply_blocking_pair(inst, &current, bp)
                        .expect("undominated pairs block the current matching")
                })
                .collect();
            if rng.next_f64() < params.random_walk_p {
                current = rng.choose(&neighbors).clone();
            } else {
                let current_eval = eval_ltiu(inst, &current);
                let evals: Vec<i64> = neighbors.iter().map(|nb| eval_ltiu(inst, nb)).collect();
                let min_eval = *evals.iter().min().unwrap();
                if current_eval > min_eval {
                    let minima: Vec<usize> = (0..neighbors.len())
                        .filter(|&i| evals[i] == min_eval)
                        .collect();
                    current = neighbors[*rng.choose(&minima)].clone();
                } else {
                    current = rng.choose(&neighbors).clone();
                }
            }
        }
        steps += 1;
    }

    let raw_eval = best_eval;
    let stabilized = stabilize(inst, best, &mut rng);
    let stabilized_eval = eval_ltiu(inst, &stabilized);
    let cost = stabilized.matched_count() as i64;
    SolveReport {
        matching: stabilized,
        objective: Objective::MaxCardinality,
        cost,
        optimal: false,
        stats: SearchStats {
            steps,
            restarts,
            elapsed_ms: start.elapsed().as_millis() as u64,
            raw_eval: Some(raw_eval),
            stabilized_eval: Some(stabilized_eval),
            ..SearchStats::default()
        },
    }
}

/// Drives `mu` to weak stability by satisfying random undominated blocking
/// pairs, falling back to deferred acceptance if the walk has not settled
/// within n² moves.
fn stabilize(inst: &Instance, mut mu: Matching, rng: &mut Xoshiro256PlusPlus) -> Matching {
    let cap = (inst.n() * inst.n()) as u64;
    for _ in 0..=cap {
        let candidates = undominated_blocking_pairs(inst, &mu);
        if candidates.is_empty() {
            return mu;
        }
        mu = apply_blocking_pair(inst, &mu, rng.choose(&candidates))
            .expect("chosen pair blocks the current matching");
    }
    deferred_acceptance(inst, rng.next_u64())
}
