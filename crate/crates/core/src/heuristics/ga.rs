//! Genetic algorithm over stable matchings.
//!
//! Chromosomes are whole stable matchings; the initial population comes from
//! deferred acceptance under independent random tie-breaks, and fitness is
//! the number of matched pairs. Each round copies the population, appends
//! offspring from cycle crossover between fitness-proportionally selected
//! parents, mutates every member of the copy with the mutation probability,
//! and keeps the fittest `population_size` solutions. Crossover and mutation
//! only accept results that introduce no blocking pair, so every chromosome
//! stays stable and the best fitness never decreases.

use std::time::Instant;

use crate::instance::Instance;
use crate::matching::Matching;
use crate::report::{SearchStats, SolveReport};
use crate::rng::Xoshiro256PlusPlus;
use crate::stability::{is_blocking, is_stable, Objective};

use super::deferred_acceptance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub evolution_rounds: u64,
    pub crossover_p: f64,
    pub mutation_p: f64,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 50,
            evolution_rounds: 1000,
            crossover_p: 0.7,
            mutation_p: 0.2,
            seed: 0,
        }
    }
}

pub fn ga_solve(inst: &Instance, params: &GaParams) -> SolveReport {
    assert!(
        params.population_size >= 2,
        "population needs at least two chromosomes"
    );
    assert!(params.evolution_rounds >= 1, "at least one evolution round");
    assert!((0.0..=1.0).contains(&params.crossover_p));
    assert!((0.0..=1.0).contains(&params.mutation_p));
    let start = Instant::now();
    let mut rng = Xoshiro256PlusPlus::new(params.seed);

    // The first chromosome reuses the caller's seed directly, so the result
    // can never fall below a standalone deferred-acceptance run with the
    // same seed.
    let mut population: Vec<Matching> = Vec::with_capacity(params.population_size);
    population.push(deferred_acceptance(inst, params.seed));
    for _ in 1..params.population_size {
        population.push(deferred_acceptance(inst, rng.next_u64()));
    }

    let mut best_fitness = population
        .iter()
        .map(Matching::matched_count)
        .max()
        .unwrap();
    for _ in 0..params.evolution_rounds {
        let mut temp = population.clone();
        let fitness: Vec<usize> = population.iter().map(Matching::matched_count).collect();
        let total: usize = fitness.iter().sum();
        for _ in 0..params.population_size / 2 {
            if rng.next_f64() < params.crossover_p {
                let pa = select_parent(&fitness, total, &mut rng);
                let pb = select_parent(&fitness, total, &mut rng);
                let (c1, c2) = cycle_crossover(inst, &population[pa], &population[pb], &mut rng);
                temp.push(c1);
                temp.push(c2);
            }
        }
        for solution in temp.iter_mut() {
            if rng.next_f64() < params.mutation_p {
                *solution = mutate_with(inst, solution, &mut rng);
            }
        }
        // Elitist truncation: stable sort keeps earlier solutions on ties.
        temp.sort_by_key(|solution| std::cmp::Reverse(solution.matched_count()));
        temp.truncate(params.population_size);
        population = temp;
        debug_assert!(
            population[0].matched_count() >= best_fitness,
            "elitism keeps the best fitness from falling"
        );
        best_fitness = best_fitness.max(population[0].matched_count());
    }

    let best = population.swap_remove(0);
    let cost = best.matched_count() as i64;
    SolveReport {
        matching: best,
        objective: Objective::MaxCardinality,
        cost,
        optimal: false,
        stats: SearchStats {
            steps: params.evolution_rounds,
            elapsed_ms: start.elapsed().as_millis() as u64,
            ..SearchStats::default()
        },
    }
}

/// Fitness-proportional selection: individual `i` is drawn with probability
/// `fitness[i] / total`. An all-zero population selects uniformly.
fn select_parent(fitness: &[usize], total: usize, rng: &mut Xoshiro256PlusPlus) -> usize {
    if total == 0 {
        return rng.next_below(fitness.len() as u64) as usize;
    }
    let target = rng.next_f64() * total as f64;
    let mut acc = 0.0;
    for (i, &f) in fitness.iter().enumerate() {
        acc += f as f64;
        if target < acc {
            return i;
        }
    }
    fitness.len() - 1
}

/// Cycle crossover adapted to partial matchings: pick a cycle of man
/// positions alternating between the two parents' assignments, swap the
/// assignments along it, repair injectivity by dropping later duplicate
/// women, and reject any child that is not stable (the respective parent
/// survives in its place).
fn cycle_crossover(
    inst: &Instance,
    a: &Matching,
    b: &Matching,
    rng: &mut Xoshiro256PlusPlus,
) -> (Matching, Matching) {
    let n = inst.n();
    let differing: Vec<usize> = (0..n)
        .filter(|&m| a.partner_of_man(m) != b.partner_of_man(m))
        .collect();
    if differing.is_empty() {
        return (a.clone(), b.clone());
    }
    let mut in_cycle = vec![false; n];
    let mut cur = *rng.choose(&differing);
    // Follow "who holds this woman in the other parent" links; the chain
    // closes into a cycle or breaks at a single slot.
    loop {
        in_cycle[cur] = true;
        let Some(w) = b.partner_of_man(cur) else {
            break;
        };
        let Some(next) = a.partner_of_woman(w) else {
            break;
        };
        if in_cycle[next] {
            break;
        }
        cur = next;
    }
    let child = |base: &Matching, other: &Matching| -> Matching {
        let mut used = vec![false; n];
        let mut out = Matching::empty(n);
        for (m, &swapped) in in_cycle.iter().enumerate() {
            let source = if swapped { other } else { base };
            if let Some(w) = source.partner_of_man(m) {
                if !used[w] {
                    used[w] = true;
                    out.match_pair(inst, m, w)
                        .expect("parents only hold acceptable pairs");
                }
            }
        }
        out
    };
    let c1 = child(a, b);
    let c2 = child(b, a);
    (
        if is_stable(inst, &c1) { c1 } else { a.clone() },
        if is_stable(inst, &c2) { c2 } else { b.clone() },
    )
}

/// Mutation: one pass looking for a reassignment that raises the number of
/// matched pairs without introducing any blocking pair. Candidate moves, in
/// order: marry a single man to a single woman; let a single man take a
/// matched woman whose partner moves to a single woman, neither mover worse
/// off; the mirror chain starting from a single woman. Deeper improvement
/// cycles are not searched. Returns the input unchanged when no move
/// qualifies, and preserves stability whenever the input is stable.
pub fn mutate_pareto(inst: &Instance, mu: &Matching, seed: u64) -> Matching {
    let mut rng = Xoshiro256PlusPlus::new(seed);
    mutate_with(inst, mu, &mut rng)
}

pub(super) fn mutate_with(
    inst: &Instance,
    mu: &Matching,
    rng: &mut Xoshiro256PlusPlus,
) -> Matching {
    let n = inst.n();
    let mut single_men: Vec<usize> = (0..n).filter(|&m| mu.is_single_man(m)).collect();
    let mut single_women: Vec<usize> = (0..n).filter(|&w| mu.is_single_woman(w)).collect();
    rng.shuffle(&mut single_men);
    rng.shuffle(&mut single_women);

    // Marry two singles.
    for &m in &single_men {
        let mut candidates: Vec<usize> = single_women
            .iter()
            .copied()
            .filter(|&w| inst.acceptable(m, w))
            .collect();
        rng.shuffle(&mut candidates);
        for &w in &candidates {
            let mut next = mu.clone();
            next.match_pair(inst, m, w).unwrap();
            if !introduces_blocking(inst, mu, &next, &[m], &[w]) {
                return next;
            }
        }
    }

    // Chain from a single man: he takes a matched woman (no worse for her),
    // her partner moves on to a single woman (no worse for him).
    for &m in &single_men {
        let mut taken: Vec<usize> = (0..n)
            .filter(|&w| !mu.is_single_woman(w) && inst.acceptable(m, w))
            .collect();
        rng.shuffle(&mut taken);
        for &w in &taken {
            let displaced = mu.partner_of_woman(w).unwrap();
            if inst.wrank(w, m).unwrap() > inst.wrank(w, displaced).unwrap() {
                continue;
            }
            let mut targets: Vec<usize> = single_women
                .iter()
                .copied()
                .filter(|&w2| {
                    inst.acceptable(displaced, w2)
                        && inst.mrank(displaced, w2).unwrap() <= inst.mrank(displaced, w).unwrap()
                })
                .collect();
            rng.shuffle(&mut targets);
            for &w2 in &targets {
                let mut next = mu.clone();
                next.match_pair(inst, m, w).unwrap();
                next.match_pair(inst, displaced, w2).unwrap();
                if !introduces_blocking(inst, mu, &next, &[m, displaced], &[w, w2]) {
                    return next;
                }
            }
        }
    }

    // Mirror chain from a single woman.
    for &w in &single_women {
        let mut taken: Vec<usize> = (0..n)
            .filter(|&m| !mu.is_single_man(m) && inst.acceptable(m, w))
            .collect();
        rng.shuffle(&mut taken);
        for &m in &taken {
            let displaced = mu.partner_of_man(m).unwrap();
            if inst.mrank(m, w).unwrap() > inst.mrank(m, displaced).unwrap() {
                continue;
            }
            let mut targets: Vec<usize> = single_men
                .iter()
                .copied()
                .filter(|&m2| {
                    inst.acceptable(m2, displaced)
                        && inst.wrank(displaced, m2).unwrap() <= inst.wrank(displaced, m).unwrap()
                })
                .collect();
            rng.shuffle(&mut targets);
            for &m2 in &targets {
                let mut next = mu.clone();
                next.match_pair(inst, m, w).unwrap();
                next.match_pair(inst, m2, displaced).unwrap();
                if !introduces_blocking(inst, mu, &next, &[m, m2], &[w, displaced]) {
                    return next;
                }
            }
        }
    }

    mu.clone()
}

/// True iff `after` has a blocking pair that `before` did not. Only pairs
/// touching an agent whose assignment changed can flip status, so the scan
/// is restricted to those rows and columns.
fn introduces_blocking(
    inst: &Instance,
    before: &Matching,
    after: &Matching,
    touched_men: &[usize],
    touched_women: &[usize],
) -> bool {
    let n = inst.n();
    for &m in touched_men {
        for w in 0..n {
            if is_blocking(inst, after, m, w).is_some() && is_blocking(inst, before, m, w).is_none()
            {
                return true;
            }
        }
    }
    for &w in touched_women {
        for m in 0..n {
            if is_blocking(inst, after, m, w).is_some() && is_blocking(inst, before, m, w).is_none()
            {
                return true;
            }
        }
    }
    false
}
