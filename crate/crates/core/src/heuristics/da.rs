//! Man-proposing deferred acceptance over a seeded strict refinement of the
//! preference lists. Breaking every tie first and then running classic
//! Gale–Shapley on the mutually acceptable pairs yields a weakly stable
//! matching of the original instance: any weak blocking pair would need a
//! strict improvement (or a single agent) on both ends, and strict order is
//! preserved by the refinement.

use crate::instance::Instance;
use crate::matching::Matching;
use crate::rng::Xoshiro256PlusPlus;

/// Stable matching from seeded random tie-breaking. The refinement shuffles
/// each tie group independently (men `0..n` first, then women, groups in
/// ascending rank), so different seeds explore different tie-breaks.
pub fn deferred_acceptance(inst: &Instance, seed: u64) -> Matching {
    let mut rng = Xoshiro256PlusPlus::new(seed);
    let refine = |groups: &[Vec<usize>], rng: &mut Xoshiro256PlusPlus| {
        let mut out = Vec::new();
        for group in groups {
            let mut g = group.clone();
            rng.shuffle(&mut g);
            out.extend(g);
        }
        out
    };
    let men: Vec<Vec<usize>> = (0..inst.n())
        .map(|m| refine(inst.man_groups(m), &mut rng))
        .collect();
    let women: Vec<Vec<usize>> = (0..inst.n())
        .map(|w| refine(inst.woman_groups(w), &mut rng))
        .collect();
    run(inst, &men, &women)
}

/// Deterministic variant breaking ties by ascending index; used to seed the
/// branch-and-bound incumbent.
pub(crate) fn deferred_acceptance_index_order(inst: &Instance) -> Matching {
    let flatten =
        |groups: &[Vec<usize>]| -> Vec<usize> { groups.iter().flatten().copied().collect() };
    let men: Vec<Vec<usize>> = (0..inst.n()).map(|m| flatten(inst.man_groups(m))).collect();
    let women: Vec<Vec<usize>> = (0..inst.n())
        .map(|w| flatten(inst.woman_groups(w)))
        .collect();
    run(inst, &men, &women)
}

fn run(inst: &Instance, men_strict: &[Vec<usize>], women_strict: &[Vec<usize>]) -> Matching {
    let n = inst.n();
    // Position in a woman's refined list = her strict rank of that man.
    let mut strict_wrank = vec![usize::MAX; n * n];
    for (w, list) in women_strict.iter().enumerate() {
        for (pos, &m) in list.iter().enumerate() {
            strict_wrank[w * n + m] = pos;
        }
    }
    let mut next_choice = vec![0usize; n];
    let mut holds: Vec<Option<usize>> = vec![None; n];
    let mut free: Vec<usize> = (0..n).rev().collect();
    while let Some(m) = free.pop() {
        while next_choice[m] < men_strict[m].len() {
            let w = men_strict[m][next_choice[m]];
            next_choice[m] += 1;
            if !inst.acceptable(m, w) {
                continue;
            }
            match holds[w] {
                None => {
                    holds[w] = Some(m);
                    break;
                }
                Some(cur) => {
                    if strict_wrank[w * n + m] < strict_wrank[w * n + cur] {
                        holds[w] = Some(m);
                        free.push(cur);
                        break;
                    }
                }
            }
        }
    }
    let mut mu = Matching::empty(n);
    for (w, held) in holds.into_iter().enumerate() {
        if let Some(m) = held {
            mu.match_pair(inst, m, w)
                .expect("proposals are restricted to mutually acceptable pairs");
        }
    }
    mu
}
