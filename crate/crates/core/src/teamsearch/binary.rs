//! Classical binary search, the bits it knows after each query, and the same
//! search run as a query algorithm in the general model.

use std::collections::BTreeSet;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lowerbound::QueryAlgorithm;
use crate::oracle::{apply_query, enumerate_instances, OrderedInstance};
use crate::qcore::{BasisLabel, Interval, OperatorKind, SparseState};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalRun {
    pub answer: usize,
    /// Positions queried, in order. Midpoints in the padding are not queried.
    pub queries: Vec<usize>,
    /// Candidate interval before the first query and after each step.
    pub intervals: Vec<Interval>,
}

fn halve(interval: Interval, bit: bool) -> Interval {
    let half = if bit { interval.lower_half() } else { interval.upper_half() };
    half.expect("interval longer than one")
}

pub fn classical_binary_search(inst: &OrderedInstance) -> ClassicalRun {
    let mut interval = Interval::new(0, inst.padded_len() - 1).expect("power-of-two length");
    let mut intervals = vec![interval];
    let mut queries = Vec::new();
    while let Some(q) = interval.midpoint() {
        if q < inst.n() {
            queries.push(q);
        }
        interval = halve(interval, inst.padded_bit(q));
        intervals.push(interval);
    }
    ClassicalRun { answer: interval.lo(), queries, intervals }
}

/// `result[j]`: positions (0-based) whose bit is determined after `j`
/// queries no matter which instance is being searched.
pub fn explicitly_known_trace(n: usize) -> Vec<BTreeSet<usize>> {
    let runs: Vec<ClassicalRun> = enumerate_instances(n).iter().map(classical_binary_search).collect();
    let steps = runs.first().map_or(0, |r| r.intervals.len());
    (0..steps)
        .map(|j| {
            let reached: BTreeSet<Interval> = runs.iter().map(|r| r.intervals[j]).collect();
            let mut open = vec![false; n];
            for iv in reached {
                // Inside [lo, hi] every bit except the last is still open.
                open[iv.lo()..iv.hi().min(n)].fill(true);
            }
            (0..n).filter(|&p| !open[p]).collect()
        })
        .collect()
}

/// Binary search in the general query model. A candidate interval `I` is
/// held as `(|z(I); q> + |z(I); n>) / sqrt 2` with `q` its midpoint; the
/// query kicks `(-1)^{x_q}` onto the first term and the unitary after it
/// turns that relative phase into the next interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddedBinarySearch {
    n: usize,
}

const HI_BITS: u32 = 32;

impl EmbeddedBinarySearch {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n >= 1 << 31 {
            return Err(Error::OutOfRange { name: "n", value: n as f64, range: "[1, 2^31)" });
        }
        Ok(Self { n })
    }

    pub fn padded_len(&self) -> usize {
        self.n.next_power_of_two()
    }

    fn idle(&self) -> usize {
        self.n
    }

    fn tag(iv: Interval) -> u64 {
        (iv.lo() as u64) << HI_BITS | iv.hi() as u64
    }

    fn untag(z: u64) -> Result<Interval> {
        Interval::new((z >> HI_BITS) as usize, (z & ((1 << HI_BITS) - 1)) as usize)
    }

    /// Terms of the state that holds `iv` as the candidate interval.
    fn prepared<T: Real>(&self, iv: Interval, scale: Complex<T>, out: &mut Vec<(BasisLabel, Complex<T>)>) {
        let z = Self::tag(iv);
        match iv.midpoint() {
            Some(q) if q < self.n => {
                let h = scale * T::FRAC_1_SQRT_2();
                out.push((BasisLabel::gen(z, q), h));
                out.push((BasisLabel::gen(z, self.idle()), h));
            }
            // Points and padding midpoints need no query.
            _ => out.push((BasisLabel::gen(z, self.idle()), scale)),
        }
    }

    fn after_query<T: Real>(&self, label: &BasisLabel) -> Result<Vec<(BasisLabel, Complex<T>)>> {
        let g = label.as_gen().ok_or(Error::WrongLabel { label: *label, context: "embedded binary search" })?;
        let iv = Self::untag(g.z)?;
        let (lower, upper) = match (iv.lower_half(), iv.upper_half()) {
            (Some(l), Some(u)) => (l, u),
            _ => return Err(Error::WrongLabel { label: *label, context: "binary search past a point" }),
        };
        let q = iv.midpoint().expect("interval longer than one");
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        let mut out = Vec::with_capacity(4);
        if q >= self.n {
            // The padding bit is 1: keep the lower half.
            self.prepared(lower, Complex::new(T::one(), T::zero()), &mut out);
        } else if g.i == q {
            self.prepared(upper, h, &mut out);
            self.prepared(lower, h, &mut out);
        } else {
            self.prepared(upper, h, &mut out);
            self.prepared(lower, -h, &mut out);
        }
        Ok(out)
    }
}

impl<T: Real> QueryAlgorithm<T> for EmbeddedBinarySearch {
    fn list_len(&self) -> usize {
        self.n
    }

    fn query_count(&self) -> usize {
        self.padded_len().trailing_zeros() as usize
    }

    fn opening_state(&self, _: &OrderedInstance) -> Result<SparseState<T>> {
        let mut terms = Vec::new();
        let full = Interval::new(0, self.padded_len() - 1)?;
        self.prepared(full, Complex::new(T::one(), T::zero()), &mut terms);
        Ok(SparseState::from_amplitudes(terms))
    }

    fn step(&self, _: usize, state: &SparseState<T>, inst: &OrderedInstance) -> Result<SparseState<T>> {
        let queried = apply_query(state, inst)?;
        queried.try_apply_linear(|l| self.after_query(l), OperatorKind::Unitary)
    }

    fn read_answer(&self, label: &BasisLabel) -> Option<usize> {
        let iv = Self::untag(label.as_gen()?.z).ok()?;
        (iv.is_point() && iv.lo() < self.n).then_some(iv.lo())
    }
}
