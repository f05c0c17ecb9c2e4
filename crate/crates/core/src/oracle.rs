//! Ordered-search instances and the diagonal query operator.
//!
//! An instance of length `n` with answer `a` is the sorted bit string
//! `x_i = [a <= i < n]`, padded with zeros beyond `n`. A query flips the
//! sign of `|z; i>` by `(-1)^{x_i}` for `i < n` and leaves `i >= n` alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{BasisLabel, Phase, SparseState};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct OrderedInstance {
    n: usize,
    answer: usize,
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    answer: usize,
}

impl TryFrom<RawInstance> for OrderedInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        OrderedInstance::new(raw.n, raw.answer)
    }
}

impl OrderedInstance {
    pub fn new(n: usize, answer: usize) -> Result<Self> {
        if n == 0 || answer >= n {
            return Err(Error::InvalidInstance { n, answer });
        }
        Ok(Self { n, answer })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn answer(&self) -> usize {
        self.answer
    }

    /// Oracle bit `x_i`.
    pub fn bit(&self, i: usize) -> bool {
        self.answer <= i && i < self.n
    }

    /// Bit of the list padded with ones up to the next power of two.
    ///
    /// Padding with ones keeps the list sorted and the answer unchanged.
    pub fn padded_bit(&self, i: usize) -> bool {
        self.answer <= i && i < self.padded_len()
    }

    pub fn padded_len(&self) -> usize {
        self.n.next_power_of_two()
    }
}

/// All `n` instances of length `n`, in increasing answer order.
pub fn enumerate_instances(n: usize) -> Vec<OrderedInstance> {
    (0..n).map(|answer| OrderedInstance { n, answer }).collect()
}

/// One application of the query operator to a state over `|z; i>` labels.
pub fn apply_query<T: Real>(state: &SparseState<T>, inst: &OrderedInstance) -> Result<SparseState<T>> {
    if let Some(label) = state.labels().find(|l| l.as_gen().is_none()) {
        return Err(Error::WrongLabel { label: *label, context: "the general-model query" });
    }
    Ok(state.apply_diagonal_phase(|label| match label {
        BasisLabel::Gen(g) => Phase::from_bit(inst.bit(g.i)),
        BasisLabel::Team(_) => Phase::Plus,
    }))
}
