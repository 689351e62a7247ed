//! Matchings: injective partial assignments of men to women, restricted to
//! mutually acceptable pairs of the owning instance.

use thiserror::Error;

use crate::instance::{AgentId, Instance, Side};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("pair (man {man}, woman {woman}) is not mutually acceptable")]
    NotAcceptable { man: usize, woman: usize },
}

/// An injective partial map from men to women. Both directions are stored so
/// partner lookups are O(1) either way; the two vectors are kept in sync by
/// the mutators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    man_partner: Vec<Option<usize>>,
    woman_partner: Vec<Option<usize>>,
    matched: usize,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            man_partner: vec![None; n],
            woman_partner: vec![None; n],
            matched: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.man_partner.len()
    }

    /// Marries `man` and `woman`, first divorcing whoever either is
    /// currently married to, so injectivity is preserved.
    ///
    /// Fails without touching the matching if the pair is not mutually
    /// acceptable in `inst`.
    pub fn match_pair(
        &mut self,
        inst: &Instance,
        man: usize,
        woman: usize,
    ) -> Result<(), MatchingError> {
        if !inst.acceptable(man, woman) {
            return Err(MatchingError::NotAcceptable { man, woman });
        }
        self.unmatch_man(man);
        self.unmatch_woman(woman);
        self.man_partner[man] = Some(woman);
        self.woman_partner[woman] = Some(man);
        self.matched += 1;
        Ok(())
    }

    /// Makes `man` single; no-op if he already is.
    pub fn unmatch_man(&mut self, man: usize) {
        if let Some(w) = self.man_partner[man].take() {
            self.woman_partner[w] = None;
            self.matched -= 1;
        }
    }

    /// Makes `woman` single; no-op if she already is.
    pub fn unmatch_woman(&mut self, woman: usize) {
        if let Some(m) = self.woman_partner[woman].take() {
            self.man_partner[m] = None;
            self.matched -= 1;
        }
    }

    pub fn unmatch(&mut self, agent: AgentId) {
        match agent.side {
            Side::Man => self.unmatch_man(agent.index),
            Side::Woman => self.unmatch_woman(agent.index),
        }
    }

    #[inline]
    pub fn partner_of_man(&self, man: usize) -> Option<usize> {
        self.man_partner[man]
    }

    #[inline]
    pub fn partner_of_woman(&self, woman: usize) -> Option<usize> {
        self.woman_partner[woman]
    }

    pub fn partner_of(&self, agent: AgentId) -> Option<usize> {
        match agent.side {
            Side::Man => self.partner_of_man(agent.index),
            Side::Woman => self.partner_of_woman(agent.index),
        }
    }

    #[inline]
    pub fn is_single_man(&self, man: usize) -> bool {
        self.man_partner[man].is_none()
    }

    #[inline]
    pub fn is_single_woman(&self, woman: usize) -> bool {
        self.woman_partner[woman].is_none()
    }

    pub fn is_single(&self, agent: AgentId) -> bool {
        self.partner_of(agent).is_none()
    }

    /// Number of matched pairs.
    pub fn matched_count(&self) -> usize {
        self.matched
    }

    /// True iff every agent is matched.
    pub fn is_perfect(&self) -> bool {
        self.matched == self.n()
    }

    /// Matched pairs `(man, woman)` in ascending man order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.man_partner
            .iter()
            .enumerate()
            .filter_map(|(m, w)| w.map(|w| (m, w)))
    }
}
