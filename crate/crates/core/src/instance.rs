//! Problem instances: equal-sized sets of men and women, each agent carrying
//! a preference list over the opposite side that may be incomplete (unlisted
//! partners are unacceptable) and may contain ties (several partners sharing
//! one rank level).
//!
//! Ranks are stored densely as levels `1..=L` per agent: within one list,
//! every occupied level below the highest is occupied too, so preference
//! comparisons are single integer comparisons. Lists are built from tie
//! groups via [`Instance::from_lists`], which makes non-contiguous levels
//! unrepresentable.

use thiserror::Error;

/// Which side of the market an agent belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }
}

/// An agent identified by side and index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
}

impl AgentId {
    pub fn man(index: usize) -> Self {
        AgentId {
            side: Side::Man,
            index,
        }
    }

    pub fn woman(index: usize) -> Self {
        AgentId {
            side: Side::Woman,
            index,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance must have at least one agent per side")]
    Empty,
    #[error("men and women counts differ: {men} men vs {women} women")]
    SideCountMismatch { men: usize, women: usize },
    #[error("{side:?} {index} has an empty preference list")]
    EmptyList { side: Side, index: usize },
    #[error("{side:?} {index} has an empty tie group")]
    EmptyGroup { side: Side, index: usize },
    #[error("{side:?} {index} lists partner {partner}, out of range for n={n}")]
    PartnerOutOfRange {
        side: Side,
        index: usize,
        partner: usize,
        n: usize,
    },
    #[error("{side:?} {index} lists partner {partner} more than once")]
    DuplicatePartner {
        side: Side,
        index: usize,
        partner: usize,
    },
    #[error("agent index {index} out of range for n={n}")]
    AgentOutOfRange { index: usize, n: usize },
    #[error("candidate and reference must both be on the side opposite the agent")]
    SideMismatch,
    #[error("{agent:?} does not rank partner {partner}")]
    NotRanked { agent: AgentId, partner: usize },
}

/// Dense rank table for one side: `ranks[agent * n + partner]`, 0 = unranked.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RankTable {
    n: usize,
    ranks: Vec<u32>,
}

impl RankTable {
    fn from_lists(side: Side, lists: &[Vec<Vec<usize>>], n: usize) -> Result<Self, InstanceError> {
        let mut ranks = vec![0u32; n * n];
        for (index, groups) in lists.iter().enumerate() {
            if groups.is_empty() {
                return Err(InstanceError::EmptyList { side, index });
            }
            for (level, group) in groups.iter().enumerate() {
                if group.is_empty() {
                    return Err(InstanceError::EmptyGroup { side, index });
                }
                for &partner in group {
                    if partner >= n {
                        return Err(InstanceError::PartnerOutOfRange {
                            side,
                            index,
                            partner,
                            n,
                        });
                    }
                    let slot = &mut ranks[index * n + partner];
                    if *slot != 0 {
                        return Err(InstanceError::DuplicatePartner {
                            side,
                            index,
                            partner,
                        });
                    }
                    *slot = level as u32 + 1;
                }
            }
        }
        Ok(RankTable { n, ranks })
    }

    #[inline]
    fn rank(&self, agent: usize, partner: usize) -> Option<u32> {
        match self.ranks[agent * self.n + partner] {
            0 => None,
            r => Some(r),
        }
    }
}

/// An immutable problem instance over `n` men and `n` women.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    mrank: RankTable,
    wrank: RankTable,
    /// Per man: tie groups in ascending rank, indices ascending within a group.
    mlists: Vec<Vec<Vec<usize>>>,
    /// Per woman: same layout as `mlists`.
    wlists: Vec<Vec<Vec<usize>>>,
}

impl Instance {
    /// Builds an instance from tie-group preference lists: `men[x]` is man
    /// `x`'s list of groups in ascending rank order (group `g` gets rank
    /// `g + 1`), and symmetrically for `women`.
    ///
    /// Every agent must list at least one partner; groups must be nonempty,
    /// in range, and free of duplicates across the whole list. Acceptability
    /// is not forced symmetric: a man may list a woman who does not list him
    /// back, in which case the pair is simply not mutually acceptable.
    pub fn from_lists(
        men: Vec<Vec<Vec<usize>>>,
        women: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, InstanceError> {
        if men.len() != women.len() {
            return Err(InstanceError::SideCountMismatch {
                men: men.len(),
                women: women.len(),
            });
        }
        let n = men.len();
        if n == 0 {
            return Err(InstanceError::Empty);
        }
        let mrank = RankTable::from_lists(Side::Man, &men, n)?;
        let wrank = RankTable::from_lists(Side::Woman, &women, n)?;
        let canonicalize = |mut lists: Vec<Vec<Vec<usize>>>| {
            for groups in &mut lists {
                for group in groups.iter_mut() {
                    group.sort_unstable();
                }
            }
            lists
        };
        Ok(Instance {
            n,
            mrank,
            wrank,
            mlists: canonicalize(men),
            wlists: canonicalize(women),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Man `x`'s rank of woman `y`, if he lists her.
    #[inline]
    pub fn mrank(&self, man: usize, woman: usize) -> Option<u32> {
        self.check_index(man);
        self.check_index(woman);
        self.mrank.rank(man, woman)
    }

    /// Woman `y`'s rank of man `x`, if she lists him.
    #[inline]
    pub fn wrank(&self, woman: usize, man: usize) -> Option<u32> {
        self.check_index(woman);
        self.check_index(man);
        self.wrank.rank(woman, man)
    }

    /// `agent`'s rank of the opposite-side `partner`, if listed.
    pub fn rank(&self, agent: AgentId, partner: usize) -> Option<u32> {
        match agent.side {
            Side::Man => self.mrank(agent.index, partner),
            Side::Woman => self.wrank(agent.index, partner),
        }
    }

    /// True iff the pair is mutually acceptable: both ranks are defined.
    ///
    /// # Panics
    /// Panics if either index is `>= n`.
    #[inline]
    pub fn acceptable(&self, man: usize, woman: usize) -> bool {
        self.mrank(man, woman).is_some() && self.wrank(woman, man).is_some()
    }

    /// True iff `agent` ranks `candidate` at the same level or better than
    /// `reference`. Ties count: equal levels are "at least as good".
    pub fn at_least_as_good(
        &self,
        agent: AgentId,
        candidate: AgentId,
        reference: AgentId,
    ) -> Result<bool, InstanceError> {
        if candidate.side != reference.side || candidate.side != agent.side.opposite() {
            return Err(InstanceError::SideMismatch);
        }
        for id in [agent, candidate, reference] {
            if id.index >= self.n {
                return Err(InstanceError::AgentOutOfRange {
                    index: id.index,
                    n: self.n,
                });
            }
        }
        let rank_of = |partner: usize| {
            self.rank(agent, partner)
                .ok_or(InstanceError::NotRanked { agent, partner })
        };
        Ok(rank_of(candidate.index)? <= rank_of(reference.index)?)
    }

    /// Man `x`'s tie groups, ascending rank; indices ascending within a group.
    pub fn man_groups(&self, man: usize) -> &[Vec<usize>] {
        &self.mlists[man]
    }

    /// Woman `y`'s tie groups, same layout as [`Instance::man_groups`].
    pub fn woman_groups(&self, woman: usize) -> &[Vec<usize>] {
        &self.wlists[woman]
    }

    pub fn groups(&self, agent: AgentId) -> &[Vec<usize>] {
        match agent.side {
            Side::Man => self.man_groups(agent.index),
            Side::Woman => self.woman_groups(agent.index),
        }
    }

    /// Women mutually acceptable to `man`, ascending index.
    pub fn acceptable_women(&self, man: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| self.acceptable(man, w))
    }

    /// Men mutually acceptable to `woman`, ascending index.
    pub fn acceptable_men(&self, woman: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&m| self.acceptable(m, woman))
    }

    /// All mutually acceptable pairs, man-major order.
    pub fn acceptable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |m| self.acceptable_women(m).map(move |w| (m, w)))
    }

    /// The instance with the roles of men and women swapped.
    pub fn transposed(&self) -> Instance {
        Instance {
            n: self.n,
            mrank: self.wrank.clone(),
            wrank: self.mrank.clone(),
            mlists: self.wlists.clone(),
            wlists: self.mlists.clone(),
        }
    }

    #[inline]
    fn check_index(&self, index: usize) {
        assert!(
            index < self.n,
            "agent index {index} out of range for n={}",
            self.n
        );
    }
}

/// Shorthand for building instances in tests: each agent's list is given as
/// tie groups, e.g. `&[&[1, 0], &[2]]` ranks partners 1 and 0 tied first,
/// then partner 2.
pub fn instance_from_slices(men: &[&[&[usize]]], women: &[&[&[usize]]]) -> Instance {
    let conv = |side: &[&[&[usize]]]| {
        side.iter()
            .map(|groups| groups.iter().map(|g| g.to_vec()).collect())
            .collect()
    };
    Instance::from_lists(conv(men), conv(women)).expect("valid instance literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_by_one_mutual() -> Instance {
        instance_from_slices(&[&[&[0]]], &[&[&[0]]])
    }

    #[test]
    fn acceptable_requires_both_ranks() {
        let inst = one_by_one_mutual();
        assert!(inst.acceptable(0, 0));
        assert_eq!(inst.mrank(0, 0), Some(1));
        assert_eq!(inst.wrank(0, 0), Some(1));
    }

    #[test]
    fn one_sided_listing_is_not_acceptable() {
        // Man 0 lists w0 and w1; woman 1 lists only man 1 back.
        let inst = instance_from_slices(&[&[&[0], &[1]], &[&[1]]], &[&[&[0]], &[&[1]]]);
        assert!(inst.acceptable(0, 0));
        assert!(!inst.acceptable(0, 1), "w1 does not list m0");
        assert!(inst.acceptable(1, 1));
    }

    #[test]
    fn ranks_need_not_agree_for_acceptability() {
        // mrank(0,1) = 2, wrank(1,0) = 1.
        let inst = instance_from_slices(&[&[&[0], &[1]], &[&[0]]], &[&[&[1]], &[&[0]]]);
        assert_eq!(inst.mrank(0, 1), Some(2));
        assert_eq!(inst.wrank(1, 0), Some(1));
        assert!(inst.acceptable(0, 1));
    }

    #[test]
    fn at_least_as_good_handles_ties_and_strict_order() {
        // Man 0: w1, w0 tied at rank 1; w2 at rank 2.
        let inst = instance_from_slices(
            &[&[&[0, 1], &[2]], &[&[0]], &[&[2]]],
            &[&[&[0]], &[&[0]], &[&[0], &[2]]],
        );
        let m0 = AgentId::man(0);
        // strictly better
        assert!(inst
            .at_least_as_good(m0, AgentId::woman(0), AgentId::woman(2))
            .unwrap());
        // tie counts as "same level or better"
        assert!(inst
            .at_least_as_good(m0, AgentId::woman(0), AgentId::woman(1))
            .unwrap());
        // strictly worse
        assert!(!inst
            .at_least_as_good(m0, AgentId::woman(2), AgentId::woman(0))
            .unwrap());
    }

    #[test]
    fn at_least_as_good_rejects_unranked_partner() {
        let inst = instance_from_slices(&[&[&[0]], &[&[0]]], &[&[&[0], &[1]], &[&[1]]]);
        let err = inst
            .at_least_as_good(AgentId::man(0), AgentId::woman(1), AgentId::woman(0))
            .unwrap_err();
        assert_eq!(
            err,
            InstanceError::NotRanked {
                agent: AgentId::man(0),
                partner: 1
            }
        );
    }

    #[test]
    fn at_least_as_good_rejects_mixed_sides() {
        let inst = one_by_one_mutual();
        let err = inst
            .at_least_as_good(AgentId::man(0), AgentId::man(0), AgentId::woman(0))
            .unwrap_err();
        assert_eq!(err, InstanceError::SideMismatch);
    }

    #[test]
    fn construction_rejects_bad_lists() {
        assert_eq!(
            Instance::from_lists(vec![], vec![]).unwrap_err(),
            InstanceError::Empty
        );
        assert_eq!(
            Instance::from_lists(vec![vec![]], vec![vec![vec![0]]]).unwrap_err(),
            InstanceError::EmptyList {
                side: Side::Man,
                index: 0
            }
        );
        assert_eq!(
            Instance::from_lists(vec![vec![vec![0, 0]]], vec![vec![vec![0]]]).unwrap_err(),
            InstanceError::DuplicatePartner {
                side: Side::Man,
                index: 0,
                partner: 0
            }
        );
        assert_eq!(
            Instance::from_lists(vec![vec![vec![1]]], vec![vec![vec![0]]]).unwrap_err(),
            InstanceError::PartnerOutOfRange {
                side: Side::Man,
                index: 0,
                partner: 1,
                n: 1
            }
        );
    }

    #[test]
    fn transposed_swaps_rank_tables() {
        let inst = instance_from_slices(&[&[&[0], &[1]], &[&[1]]], &[&[&[0]], &[&[1], &[0]]]);
        let t = inst.transposed();
        assert_eq!(t.mrank(1, 0), inst.wrank(1, 0));
        assert_eq!(t.wrank(0, 1), inst.mrank(0, 1));
        assert_eq!(t.transposed(), inst);
    }

    /// Random tie-group lists for property tests.
    fn arb_lists(n: usize) -> impl Strategy<Value = Vec<Vec<Vec<usize>>>> {
        proptest::collection::vec(
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n).prop_flat_map(
                move |entries| {
                    let len = entries.len();
                    (Just(entries), proptest::collection::vec(any::<bool>(), len)).prop_map(
                        |(entries, ties)| {
                            let mut groups: Vec<Vec<usize>> = Vec::new();
                            for (i, e) in entries.into_iter().enumerate() {
                                if i == 0 || !ties[i] {
                                    groups.push(vec![e]);
                                } else {
                                    groups.last_mut().unwrap().push(e);
                                }
                            }
                            groups
                        },
                    )
                },
            ),
            n,
        )
    }

    proptest! {
        #[test]
        fn ranks_are_contiguous_from_one(
            (men, women) in (2usize..6).prop_flat_map(|n| (arb_lists(n), arb_lists(n)))
        ) {
            let inst = Instance::from_lists(men, women).unwrap();
            let n = inst.n();
            for a in 0..n {
                for side in [Side::Man, Side::Woman] {
                    let agent = AgentId { side, index: a };
                    let levels = inst.groups(agent).len();
                    let mut seen = vec![false; levels];
                    for p in 0..n {
                        if let Some(r) = inst.rank(agent, p) {
                            prop_assert!(r >= 1 && r as usize <= levels);
                            seen[r as usize - 1] = true;
                        }
                    }
                    prop_assert!(seen.iter().all(|&s| s), "every level below the top occupied");
                }
            }
        }

        #[test]
        fn at_least_as_good_is_reflexive_and_transitive(
            (men, women) in (2usize..6).prop_flat_map(|n| (arb_lists(n), arb_lists(n)))
        ) {
            let inst = Instance::from_lists(men, women).unwrap();
            let n = inst.n();
            for m in 0..n {
                let agent = AgentId::man(m);
                let listed: Vec<usize> = (0..n).filter(|&w| inst.mrank(m, w).is_some()).collect();
                for &a in &listed {
                    prop_assert!(inst
                        .at_least_as_good(agent, AgentId::woman(a), AgentId::woman(a))
                        .unwrap());
                    for &b in &listed {
                        for &c in &listed {
                            let ab = inst.at_least_as_good(agent, AgentId::woman(a), AgentId::woman(b)).unwrap();
                            let bc = inst.at_least_as_good(agent, AgentId::woman(b), AgentId::woman(c)).unwrap();
                            let ac = inst.at_least_as_good(agent, AgentId::woman(a), AgentId::woman(c)).unwrap();
                            if ab && bc {
                                prop_assert!(ac);
                            }
                        }
                    }
                }
            }
        }
    }
}
