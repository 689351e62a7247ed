//! Exact solvers.
//!
//! [`brute_force`] enumerates every injective partial map over mutually
//! acceptable pairs, filters by stability, and returns an optimum; it is the
//! ground-truth oracle and is guarded to tiny sizes.
//!
//! [`branch_and_bound`] runs a depth-first search over men in index order,
//! assigning each a mutually acceptable woman (ascending rank, then index)
//! or leaving him single (tried last). Partial assignments are pruned when
//! they already violate a stability requirement that no completion can
//! repair — for an acceptable pair (i, j) with man i decided and not matched
//! at least as well as j, woman j must end up matched at least as well as i,
//! which is impossible once she is matched worse or has no undecided suitor
//! she weakly prefers to i — and when an objective bound shows the subtree
//! cannot beat the incumbent. Pruning is sound only; a full stability check
//! at every leaf remains the authoritative filter. The incumbent starts from
//! the deterministic deferred-acceptance matching, so a timeout always
//! reports a valid stable matching with `optimal = false`.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::heuristics::deferred_acceptance_index_order;
use crate::instance::Instance;
use crate::matching::Matching;
use crate::report::{SearchStats, SolveReport};
use crate::stability::{cost, is_stable, Objective};

/// Enumeration guard: partial injective maps explode combinatorially past
/// this size.
pub const BRUTE_FORCE_MAX_N: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("exhaustive enumeration is limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
}

/// Cost in minimized form so all three objectives compare the same way.
fn minimized(objective: Objective, value: i64) -> i64 {
    if objective.maximizing() {
        -value
    } else {
        value
    }
}

/// Exhaustive optimum over all weakly stable matchings. Ties between optima
/// are broken toward the lexicographically smallest assignment vector
/// (each man's woman index, with "single" sorting last).
pub fn brute_force(inst: &Instance, objective: Objective) -> Result<SolveReport, ExactError> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(ExactError::TooLarge {
            n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    let start = Instant::now();
    let choices: Vec<Vec<usize>> = (0..n).map(|m| inst.acceptable_women(m).collect()).collect();
    let mut state = Enumeration {
        inst,
        objective,
        choices,
        current: Matching::empty(n),
        best: None,
        nodes: 0,
    };
    state.run(0);
    let (best_key, matching) = state
        .best
        .expect("at least one weakly stable matching always exists");
    let natural = if objective.maximizing() {
        -best_key
    } else {
        best_key
    };
    Ok(SolveReport {
        matching,
        objective,
        cost: natural,
        optimal: true,
        stats: SearchStats {
            nodes_explored: state.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
            ..SearchStats::default()
        },
    })
}

struct Enumeration<'a> {
    inst: &'a Instance,
    objective: Objective,
    choices: Vec<Vec<usize>>,
    current: Matching,
    /// Minimized cost plus the tie-break key of the best stable leaf.
    best: Option<(i64, Matching)>,
    nodes: u64,
}

impl Enumeration<'_> {
    fn run(&mut self, man: usize) {
        let n = self.inst.n();
        if man == n {
            if !is_stable(self.inst, &self.current) {
                return;
            }
            let key = minimized(
                self.objective,
                cost(self.inst, &self.current, self.objective),
            );
            let better = match &self.best {
                None => true,
                Some((best_key, best_mu)) => {
                    key < *best_key
                        || (key == *best_key
                            && assignment_vector(&self.current) < assignment_vector(best_mu))
                }
            };
            if better {
                self.best = Some((key, self.current.clone()));
            }
            return;
        }
        for i in 0..self.choices[man].len() {
            let woman = self.choices[man][i];
            if self.current.partner_of_woman(woman).is_none() {
                self.nodes += 1;
                self.current.match_pair(self.inst, man, woman).unwrap();
                self.run(man + 1);
                self.current.unmatch_man(man);
            }
        }
        self.nodes += 1;
        self.run(man + 1); // man stays single
    }
}

fn assignment_vector(mu: &Matching) -> Vec<usize> {
    let n = mu.n();
    (0..n).map(|m| mu.partner_of_man(m).unwrap_or(n)).collect()
}

/// Branch-and-bound optimum. `time_limit_ms = 0` means unlimited; on
/// timeout the best incumbent is returned with `optimal = false`.
pub fn branch_and_bound(inst: &Instance, objective: Objective, time_limit_ms: u64) -> SolveReport {
    let start = Instant::now();
    let n = inst.n();

    // Value order: mutually acceptable women by ascending rank then index —
    // exactly the flattened tie groups restricted to mutual pairs.
    let choices: Vec<Vec<usize>> = (0..n)
        .map(|m| {
            inst.man_groups(m)
                .iter()
                .flatten()
                .copied()
                .filter(|&w| inst.acceptable(m, w))
                .collect()
        })
        .collect();

    // last_suitor[(i, j)]: the highest-indexed man woman j weakly prefers to
    // man i; once the search passes him, nobody acceptable to her can still
    // satisfy a pending requirement for (i, j).
    let mut men_of_woman: Vec<Vec<usize>> =
        (0..n).map(|w| inst.acceptable_men(w).collect()).collect();
    for list in &mut men_of_woman {
        list.sort_unstable();
    }
    let mut pairs_by_last_suitor: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (m, ws) in choices.iter().enumerate() {
        for &w in ws {
            let bar = inst.wrank(w, m).unwrap();
            let last = men_of_woman[w]
                .iter()
                .copied()
                .filter(|&p| inst.wrank(w, p).unwrap() <= bar)
                .max()
                .expect("the pair's own man qualifies");
            pairs_by_last_suitor[last].push((m, w));
        }
    }

    // Per-man swing of (mrank - wrank) for the sex-equal bound; staying
    // single contributes zero, so zero is always in range.
    let mut suffix_min_gap = vec![0i64; n + 1];
    let mut suffix_max_gap = vec![0i64; n + 1];
    for m in (0..n).rev() {
        let (lo, hi) = choices[m].iter().fold((0i64, 0i64), |(lo, hi), &w| {
            let delta = inst.mrank(m, w).unwrap() as i64 - inst.wrank(w, m).unwrap() as i64;
            (lo.min(delta), hi.max(delta))
        });
        suffix_min_gap[m] = suffix_min_gap[m + 1] + lo;
        suffix_max_gap[m] = suffix_max_gap[m + 1] + hi;
    }

    let incumbent = deferred_acceptance_index_order(inst);
    let incumbent_cost = minimized(objective, cost(inst, &incumbent, objective));

    let mut search = Search {
        inst,
        objective,
        choices,
        men_of_woman,
        pairs_by_last_suitor,
        suffix_min_gap,
        suffix_max_gap,
        assignment: vec![None; n],
        woman_partner: vec![None; n],
        matched: 0,
        egal_partial: 0,
        gap_partial: 0,
        best_cost: incumbent_cost,
        best: incumbent,
        nodes: 0,
        deadline: (time_limit_ms > 0).then(|| start + Duration::from_millis(time_limit_ms)),
        timed_out: false,
    };
    search.dfs(0);

    let natural = if objective.maximizing() {
        -search.best_cost
    } else {
        search.best_cost
    };
    SolveReport {
        matching: search.best,
        objective,
        cost: natural,
        optimal: !search.timed_out,
        stats: SearchStats {
            nodes_explored: search.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
            ..SearchStats::default()
        },
    }
}

struct Search<'a> {
    inst: &'a Instance,
    objective: Objective,
    choices: Vec<Vec<usize>>,
    men_of_woman: Vec<Vec<usize>>,
    pairs_by_last_suitor: Vec<Vec<(usize, usize)>>,
    suffix_min_gap: Vec<i64>,
    suffix_max_gap: Vec<i64>,
    assignment: Vec<Option<usize>>,
    woman_partner: Vec<Option<usize>>,
    matched: usize,
    egal_partial: i64,
    gap_partial: i64,
    best_cost: i64,
    best: Matching,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    fn dfs(&mut self, man: usize) {
        if self.timed_out {
            return;
        }
        let n = self.inst.n();
        if man == n {
            self.take_leaf();
            return;
        }
        if self.lower_bound(man) >= self.best_cost {
            return;
        }
        for i in 0..self.choices[man].len() {
            let woman = self.choices[man][i];
            if self.woman_partner[woman].is_some() {
                continue;
            }
            self.enter(man, Some(woman));
            if !self.newly_violated(man, Some(woman)) {
                self.dfs(man + 1);
            }
            self.leave(man, Some(woman));
            if self.timed_out {
                return;
            }
        }
        self.enter(man, None);
        if !self.newly_violated(man, None) {
            self.dfs(man + 1);
        }
        self.leave(man, None);
    }

    fn take_leaf(&mut self) {
        let mut mu = Matching::empty(self.inst.n());
        for (m, w) in self.assignment.iter().enumerate() {
            if let Some(w) = *w {
                mu.match_pair(self.inst, m, w).unwrap();
            }
        }
        // Authoritative filter: pruning is sound only, leaves decide.
        if !is_stable(self.inst, &mu) {
            return;
        }
        let key = minimized(self.objective, cost(self.inst, &mu, self.objective));
        if key < self.best_cost {
            self.best_cost = key;
            self.best = mu;
        }
    }

    fn enter(&mut self, man: usize, woman: Option<usize>) {
        self.nodes += 1;
        if self.nodes & 0xFF == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                }
            }
        }
        self.assignment[man] = woman;
        if let Some(w) = woman {
            self.woman_partner[w] = Some(man);
            self.matched += 1;
            let mr = self.inst.mrank(man, w).unwrap() as i64;
            let wr = self.inst.wrank(w, man).unwrap() as i64;
            self.egal_partial += mr + wr;
            self.gap_partial += mr - wr;
        }
    }

    fn leave(&mut self, man: usize, woman: Option<usize>) {
        self.assignment[man] = None;
        if let Some(w) = woman {
            self.woman_partner[w] = None;
            self.matched -= 1;
            let mr = self.inst.mrank(man, w).unwrap() as i64;
            let wr = self.inst.wrank(w, man).unwrap() as i64;
            self.egal_partial -= mr + wr;
            self.gap_partial -= mr - wr;
        }
    }

    /// Lower bound (minimized form) over every completion once men `0..k`
    /// are decided.
    fn lower_bound(&self, k: usize) -> i64 {
        let n = self.inst.n();
        match self.objective {
            // Every remaining man matched at best.
            Objective::MaxCardinality => -((self.matched + (n - k)) as i64),
            // Remaining pairs only ever add nonnegative rank sums.
            Objective::Egalitarian => self.egal_partial,
            // Remaining men can swing the signed gap within a fixed interval;
            // zero is reachable whenever the interval straddles it.
            Objective::SexEqual => {
                let lo = self.gap_partial + self.suffix_min_gap[k];
                let hi = self.gap_partial + self.suffix_max_gap[k];
                if lo <= 0 && 0 <= hi {
                    0
                } else {
                    lo.abs().min(hi.abs())
                }
            }
        }
    }

    /// After deciding `man`, checks exactly the pairs whose stability
    /// requirement could have just become impossible: the decided man's own
    /// row, the column of the woman he married, and the pairs for which he
    /// was the last undecided weakly-preferred suitor.
    fn newly_violated(&self, man: usize, woman: Option<usize>) -> bool {
        for &j in &self.choices[man] {
            if self.pair_violated(man, j, man) {
                return true;
            }
        }
        if let Some(w) = woman {
            for &i in &self.men_of_woman[w] {
                if i <= man && self.pair_violated(i, w, man) {
                    return true;
                }
            }
        }
        for &(i, j) in &self.pairs_by_last_suitor[man] {
            if self.pair_violated(i, j, man) {
                return true;
            }
        }
        false
    }

    /// With men `0..=depth` decided, the requirement of acceptable pair
    /// (i, j) is beyond repair iff man i is not matched at least as well as
    /// j, and woman j is either matched to someone she likes strictly less
    /// than i or unmatched with no undecided suitor she weakly prefers to i.
    fn pair_violated(&self, i: usize, j: usize, depth: usize) -> bool {
        if let Some(q) = self.assignment[i] {
            if self.inst.mrank(i, q).unwrap() <= self.inst.mrank(i, j).unwrap() {
                return false;
            }
        }
        match self.woman_partner[j] {
            Some(p) => self.inst.wrank(j, p).unwrap() > self.inst.wrank(j, i).unwrap(),
            None => {
                let bar = self.inst.wrank(j, i).unwrap();
                !self.men_of_woman[j]
                    .iter()
                    .any(|&p| p > depth && self.inst.wrank(j, p).unwrap() <= bar)
            }
        }
    }
}
