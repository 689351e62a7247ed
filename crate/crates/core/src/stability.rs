//! Weak-stability semantics: blocking-pair detection and enumeration,
//! dominance among blocking pairs, and the cost functions of the three
//! optimization variants.
//!
//! A pair (x, y) blocks a matching when the pair is mutually acceptable,
//! not married to each other, and deviating together makes neither worse
//! off and at least... concretely, one of four situations holds: both are
//! single; x strictly prefers y to his partner and y is single; y strictly
//! prefers x to her partner and x is single; or both strictly prefer each
//! other to their partners. Comparisons are strict, so ties never block:
//! this is weak stability.

use crate::instance::Instance;
use crate::matching::Matching;

/// Which of the four blocking situations fired. The four cases are mutually
/// exclusive (they are distinguished by who is single), and the label is
/// diagnostic only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockingCase {
    /// Both agents are single.
    BothSingle,
    /// The man strictly prefers the woman to his partner; she is single.
    ManImproves,
    /// The woman strictly prefers the man to her partner; he is single.
    WomanImproves,
    /// Both strictly prefer each other to their partners.
    BothImprove,
}

impl BlockingCase {
    /// Short wire label used in reports: `A3a` through `A3d`.
    pub fn label(self) -> &'static str {
        match self {
            BlockingCase::BothSingle => "A3a",
            BlockingCase::ManImproves => "A3b",
            BlockingCase::WomanImproves => "A3c",
            BlockingCase::BothImprove => "A3d",
        }
    }
}

impl std::fmt::Display for BlockingCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A blocking pair, annotated with the case that fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockingPair {
    pub man: usize,
    pub woman: usize,
    pub case: BlockingCase,
}

/// The three optimization variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Maximize the number of matched pairs (equivalently, minimize singles).
    MaxCardinality,
    /// Minimize the sum of ranks over all matched agents.
    Egalitarian,
    /// Minimize the absolute gap between the men's and women's rank sums.
    SexEqual,
}

impl Objective {
    pub const ALL: [Objective; 3] = [
        Objective::MaxCardinality,
        Objective::Egalitarian,
        Objective::SexEqual,
    ];

    /// True iff larger cost values are better for this objective.
    pub fn maximizing(self) -> bool {
        matches!(self, Objective::MaxCardinality)
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxCardinality => "max-cardinality",
            Objective::Egalitarian => "egalitarian",
            Objective::SexEqual => "sex-equal",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks whether (man, woman) blocks `mu`, returning the fired case.
pub fn is_blocking(
    inst: &Instance,
    mu: &Matching,
    man: usize,
    woman: usize,
) -> Option<BlockingPair> {
    if !inst.acceptable(man, woman) {
        return None;
    }
    if mu.partner_of_man(man) == Some(woman) {
        return None;
    }
    // Matched partners are always mutually acceptable, so the rank lookups
    // below cannot fail.
    let man_improves = mu
        .partner_of_man(man)
        .map(|cur| inst.mrank(man, woman).unwrap() < inst.mrank(man, cur).unwrap());
    let woman_improves = mu
        .partner_of_woman(woman)
        .map(|cur| inst.wrank(woman, man).unwrap() < inst.wrank(woman, cur).unwrap());
    let case = match (man_improves, woman_improves) {
        (None, None) => BlockingCase::BothSingle,
        (Some(true), None) => BlockingCase::ManImproves,
        (None, Some(true)) => BlockingCase::WomanImproves,
        (Some(true), Some(true)) => BlockingCase::BothImprove,
        _ => return None,
    };
    Some(BlockingPair { man, woman, case })
}

/// All blocking pairs, man-major then woman order.
pub fn blocking_pairs(inst: &Instance, mu: &Matching) -> Vec<BlockingPair> {
    let n = inst.n();
    let mut out = Vec::new();
    for m in 0..n {
        for w in 0..n {
            if let Some(bp) = is_blocking(inst, mu, m, w) {
                out.push(bp);
            }
        }
    }
    out
}

/// True iff no pair blocks `mu`.
pub fn is_stable(inst: &Instance, mu: &Matching) -> bool {
    let n = inst.n();
    (0..n).all(|m| (0..n).all(|w| is_blocking(inst, mu, m, w).is_none()))
}

/// Blocking pairs undominated from the men's view (no blocking pair with the
/// same man he strictly prefers) unioned with those undominated from the
/// women's view. Dominance requires strict preference, so tied pairs never
/// dominate each other.
pub fn undominated_blocking_pairs(inst: &Instance, mu: &Matching) -> Vec<BlockingPair> {
    let bps = blocking_pairs(inst, mu);
    let n = inst.n();
    let mut best_for_man = vec![u32::MAX; n];
    let mut best_for_woman = vec![u32::MAX; n];
    for bp in &bps {
        let mr = inst.mrank(bp.man, bp.woman).unwrap();
        let wr = inst.wrank(bp.woman, bp.man).unwrap();
        best_for_man[bp.man] = best_for_man[bp.man].min(mr);
        best_for_woman[bp.woman] = best_for_woman[bp.woman].min(wr);
    }
    bps.into_iter()
        .filter(|bp| {
            inst.mrank(bp.man, bp.woman).unwrap() == best_for_man[bp.man]
                || inst.wrank(bp.woman, bp.man).unwrap() == best_for_woman[bp.woman]
        })
        .collect()
}

/// Cost of `mu` under `objective`. The matching need not be stable; searches
/// evaluate unstable matchings too. Singles contribute nothing to the
/// egalitarian and sex-equal sums.
pub fn cost(inst: &Instance, mu: &Matching, objective: Objective) -> i64 {
    match objective {
        Objective::MaxCardinality => mu.matched_count() as i64,
        Objective::Egalitarian => mu
            .pairs()
            .map(|(m, w)| (inst.mrank(m, w).unwrap() + inst.wrank(w, m).unwrap()) as i64)
            .sum(),
        Objective::SexEqual => rank_sum_gap(inst, mu).abs(),
    }
}

/// Signed difference (men's rank sum − women's rank sum) over matched pairs.
pub fn rank_sum_gap(inst: &Instance, mu: &Matching) -> i64 {
    mu.pairs()
        .map(|(m, w)| inst.mrank(m, w).unwrap() as i64 - inst.wrank(w, m).unwrap() as i64)
        .sum()
}

/// Local-search evaluation: number of single agents plus number of blocking
/// pairs. Zero exactly on perfect stable matchings.
pub fn eval_ltiu(inst: &Instance, mu: &Matching) -> i64 {
    let singles = 2 * (inst.n() - mu.matched_count()) as i64;
    singles + blocking_pairs(inst, mu).len() as i64
}
