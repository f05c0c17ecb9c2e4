//! Exact ordered search by a team of computers that pool their knowledge
//! with one query per round.
//!
//! Labels are `|b>|lo,hi>`: a working bit and the computer's candidate
//! interval (0-based, inclusive).

mod accounting;
mod binary;
mod layout;
mod operators;

pub use accounting::{
    ceil_log3, decompose, digit_base, expansion, first_unrepresentable, query_count_from, query_count_model,
    Decomposition, Expansion, QueryCount,
};
pub use binary::{classical_binary_search, explicitly_known_trace, ClassicalRun, EmbeddedBinarySearch};
pub use layout::{build_layout, role_level, KnowledgeLayout, LayoutRecord};
pub use operators::{
    op_oprime, op_u, op_v, oprime_finish, oprime_prepare, run_iteration, run_iteration_traced, trace_files, Stage,
    TeamConfig,
};

pub use crate::qcore::Interval;

use crate::error::Result;
use crate::lowerbound::QueryAlgorithm;
use crate::oracle::{apply_query, OrderedInstance};
use crate::qcore::{BasisLabel, SparseState};
use crate::scalar::Real;

/// One round of the team combine as a one-query algorithm in the general
/// model. The opening state is the layout superposition after the
/// pre-query basis change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeamSearch {
    layout: KnowledgeLayout,
}

impl TeamSearch {
    pub fn new(config: TeamConfig) -> Self {
        Self { layout: KnowledgeLayout::for_config(config) }
    }

    /// The supported runs: list length 8 or 32.
    pub fn for_list_len(n: usize) -> Result<Self> {
        Ok(Self::new(TeamConfig::for_list_len(n)?))
    }

    pub fn layout(&self) -> &KnowledgeLayout {
        &self.layout
    }

    pub fn config(&self) -> TeamConfig {
        self.layout.config()
    }

    /// Every stage from the layout superposition to the final state.
    pub fn trace<T: Real>(&self, inst: &OrderedInstance) -> Result<Vec<Stage<T>>> {
        run_iteration_traced(&self.layout.opening_state(inst)?, inst, &self.config())
    }
}

impl<T: Real> QueryAlgorithm<T> for TeamSearch {
    fn list_len(&self) -> usize {
        self.config().list_len()
    }

    fn query_count(&self) -> usize {
        1
    }

    fn opening_state(&self, inst: &OrderedInstance) -> Result<SparseState<T>> {
        oprime_prepare(&self.layout.opening_state(inst)?, &self.config())
    }

    fn step(&self, _: usize, state: &SparseState<T>, inst: &OrderedInstance) -> Result<SparseState<T>> {
        operators::finish_round(&apply_query(state, inst)?, &self.config())
    }

    fn read_answer(&self, label: &BasisLabel) -> Option<usize> {
        let t = label.as_team()?;
        t.interval.is_point().then_some(t.interval.lo())
    }
}
