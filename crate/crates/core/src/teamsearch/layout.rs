//! Which oracle bits each computer knows before a round, and the opening
//! superposition built from that knowledge.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::operators::TeamConfig;
use crate::error::{Error, Result};
use crate::oracle::OrderedInstance;
use crate::qcore::{BasisLabel, Interval, SparseState, TeamLabel};
use crate::scalar::Real;

/// Knowledge level of a role inside one sublist. Role 0 is the computer that
/// knows least (only the sublist's last bit); roles `[2^(j-1), 2^j)` sit at
/// level `j` and know `2^j` evenly spaced bits.
pub fn role_level(role: usize) -> u32 {
    if role == 0 {
        0
    } else {
        role.ilog2() + 1
    }
}

/// Per-computer sets of explicitly known bit positions (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeLayout {
    config: TeamConfig,
    computers: Vec<BTreeSet<usize>>,
}

/// JSON shape of a layout, with 1-based bit indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayoutRecord {
    pub r: usize,
    pub n_list: usize,
    pub computers: Vec<Vec<usize>>,
}

/// The layout with `r` computers and `r` sublists of `2r` bits, so
/// `n = 2 r^2`.
pub fn build_layout(r: usize, n: usize) -> Result<KnowledgeLayout> {
    if !r.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { what: "computer count", value: r });
    }
    if r.checked_mul(2 * r) != Some(n) {
        return Err(Error::InvalidLayout(format!("{r} computers need a list of {} bits, got {n}", 2 * r * r)));
    }
    Ok(KnowledgeLayout::for_config(TeamConfig::new(r, r)?))
}

impl KnowledgeLayout {
    /// Computer `c` plays role `(t - c) mod r` in sublist `t`.
    pub fn for_config(config: TeamConfig) -> Self {
        let r = config.computers();
        let len = config.sublist_len();
        let computers = (0..r)
            .map(|c| {
                (0..config.sublists())
                    .flat_map(|t| {
                        let level = role_level((t + r - c % r) % r);
                        let step = len >> level;
                        (1..=1usize << level).map(move |u| t * len + step * u - 1)
                    })
                    .collect()
            })
            .collect();
        Self { config, computers }
    }

    pub fn config(&self) -> TeamConfig {
        self.config
    }

    pub fn computers(&self) -> &[BTreeSet<usize>] {
        &self.computers
    }

    /// Interval of candidate answers for computer `c`: the block between two
    /// consecutive known bits that contains `answer`.
    pub fn interval_for(&self, c: usize, answer: usize) -> Result<Interval> {
        let known = &self.computers[c];
        let hi = known
            .range(answer..)
            .next()
            .copied()
            .ok_or_else(|| Error::InvalidLayout(format!("computer {c} knows no bit at or after {answer}")))?;
        let lo = known.range(..answer).next_back().map_or(0, |p| p + 1);
        Interval::new(lo, hi)
    }

    pub fn to_record(&self) -> LayoutRecord {
        LayoutRecord {
            r: self.config.computers(),
            n_list: self.config.list_len(),
            computers: self.computers.iter().map(|s| s.iter().map(|p| p + 1).collect()).collect(),
        }
    }

    /// Equal superposition over computers of `|b>|interval>`, where `b` is 0
    /// for the computer whose interval is the whole sublist and 1 otherwise.
    /// Computers holding the same label share one term.
    pub fn opening_state<T: Real>(&self, inst: &OrderedInstance) -> Result<SparseState<T>> {
        if inst.n() != self.config.list_len() {
            return Err(Error::StateCount { expected: self.config.list_len(), got: inst.n() });
        }
        let mut counts: BTreeMap<BasisLabel, usize> = BTreeMap::new();
        for c in 0..self.computers.len() {
            let interval = self.interval_for(c, inst.answer())?;
            let bit = interval.len() != self.config.sublist_len();
            *counts.entry(BasisLabel::Team(TeamLabel { bit, interval })).or_default() += 1;
        }
        let r = T::from_usize(self.computers.len());
        SparseState::from_real(counts.into_iter().map(|(l, k)| (l, (T::from_usize(k) / r).sqrt()))).into_normalized()
    }
}
