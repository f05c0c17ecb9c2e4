//! Sparse complex state vectors over enumerable basis labels.
//!
//! A [`SparseState`] stores only non-negligible amplitudes, keyed by
//! [`BasisLabel`] in a `BTreeMap` so that iteration, summation and
//! serialization all happen in one canonical label order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::scalar::Real;

/// Inclusive dyadic interval `[lo, hi]` of list positions.
///
/// The length `hi - lo + 1` is a power of two and `lo` is a multiple of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidInterval { lo, hi });
        }
        let len = hi - lo + 1;
        if !len.is_power_of_two() || !lo.is_multiple_of(len) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The aligned interval of length `len` that contains `pos`.
    pub fn containing(pos: usize, len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { what: "interval length", value: len });
        }
        let lo = pos - pos % len;
        Self::new(lo, lo + len - 1)
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.lo <= pos && pos <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lower_half(&self) -> Option<Self> {
        (self.len() >= 2).then(|| Self { lo: self.lo, hi: self.lo + self.len() / 2 - 1 })
    }

    pub fn upper_half(&self) -> Option<Self> {
        (self.len() >= 2).then(|| Self { lo: self.lo + self.len() / 2, hi: self.hi })
    }

    /// Position of the bit that splits the interval into its two halves:
    /// the last position of the lower half.
    pub fn midpoint(&self) -> Option<usize> {
        self.lower_half().map(|h| h.hi)
    }
}

/// `|z; i>` of the general query model: workspace tag `z`, query index `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenLabel {
    pub z: u64,
    pub i: usize,
}

/// `|b>|lo, hi>` used by the team-search combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TeamLabel {
    pub bit: bool,
    pub interval: Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    Gen(GenLabel),
    Team(TeamLabel),
}

impl BasisLabel {
    pub fn gen(z: u64, i: usize) -> Self {
        BasisLabel::Gen(GenLabel { z, i })
    }

    pub fn team(bit: bool, lo: usize, hi: usize) -> Result<Self> {
        Ok(BasisLabel::Team(TeamLabel { bit, interval: Interval::new(lo, hi)? }))
    }

    pub fn as_gen(&self) -> Option<GenLabel> {
        match self {
            BasisLabel::Gen(g) => Some(*g),
            BasisLabel::Team(_) => None,
        }
    }

    pub fn as_team(&self) -> Option<TeamLabel> {
        match self {
            BasisLabel::Team(t) => Some(*t),
            BasisLabel::Gen(_) => None,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Gen(g) => write!(f, "|{};{}>", g.z, g.i),
            BasisLabel::Team(t) => {
                write!(f, "|{}>|{},{}>", u8::from(t.bit), t.interval.lo, t.interval.hi)
            }
        }
    }
}

impl FromStr for BasisLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || format!("unrecognized label `{s}`");
        let body = s.strip_prefix('|').ok_or_else(bad)?;
        if let Some((b, rest)) = body.split_once(">|") {
            let rest = rest.strip_suffix('>').ok_or_else(bad)?;
            let (lo, hi) = rest.split_once(',').ok_or_else(bad)?;
            let bit = match b {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            let lo = lo.parse().map_err(|_| bad())?;
            let hi = hi.parse().map_err(|_| bad())?;
            BasisLabel::team(bit, lo, hi).map_err(|e| e.to_string())
        } else {
            let body = body.strip_suffix('>').ok_or_else(bad)?;
            let (z, i) = body.split_once(';').ok_or_else(bad)?;
            Ok(BasisLabel::gen(z.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?))
        }
    }
}

/// Sign of a diagonal phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Plus,
    Minus,
}

impl Phase {
    /// `(-1)^bit`.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Phase::Minus
        } else {
            Phase::Plus
        }
    }
}

/// How [`SparseState::apply_linear`] should treat the operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// The caller asserts unitarity; norm drift beyond tolerance is an error.
    Unitary,
    General,
}

/// A finite superposition of basis labels.
#[derive(Clone, Debug)]
pub struct SparseState<T: Real> {
    entries: BTreeMap<BasisLabel, Complex<T>>,
    normalized: bool,
}

/// Exact amplitude equality; whether normalization was checked is ignored.
impl<T: Real> PartialEq for SparseState<T> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<T: Real> Default for SparseState<T> {
    fn default() -> Self {
        Self { entries: BTreeMap::new(), normalized: false }
    }
}

impl<T: Real> SparseState<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis state `|label>`.
    pub fn basis(label: BasisLabel) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(label, Complex::new(T::one(), T::zero()));
        Self { entries, normalized: true }
    }

    /// Builds a state from `(label, amplitude)` pairs, summing repeated labels
    /// and pruning near-zero results.
    pub fn from_amplitudes<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (BasisLabel, Complex<T>)>,
    {
        let mut entries = BTreeMap::new();
        for (label, amp) in terms {
            *entries.entry(label).or_default() += amp;
        }
        let mut state = Self { entries, normalized: false };
        state.prune();
        state
    }

    pub fn from_real<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (BasisLabel, T)>,
    {
        Self::from_amplitudes(terms.into_iter().map(|(l, a)| (l, Complex::new(a, T::zero()))))
    }

    fn prune(&mut self) {
        let cutoff = T::lit(T::PRUNE);
        self.entries.retain(|_, a| a.norm() >= cutoff);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex<T>)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &BasisLabel> {
        self.entries.keys()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex<T> {
        self.entries.get(label).copied().unwrap_or_default()
    }

    pub fn contains(&self, label: &BasisLabel) -> bool {
        self.entries.contains_key(label)
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.values().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Checks the squared norm against the normalization tolerance and marks
    /// the state normalized.
    pub fn into_normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if (n - T::one()).abs() > T::lit(T::NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: n.to_f64_lossy() });
        }
        self.normalized = true;
        Ok(self)
    }

    /// Rescales to unit norm. The zero state stays zero and is rejected.
    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        let inv = T::one() / n;
        let mut out = self.scaled(Complex::new(inv, T::zero()));
        out.normalized = true;
        Ok(out)
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self::from_amplitudes(self.entries.iter().map(|(l, a)| (*l, *a * c)))
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Complex<T> {
        let (small, large, flip) = if self.len() <= other.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = Complex::default();
        for (label, a) in &small.entries {
            if let Some(b) = large.entries.get(label) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        acc
    }

    /// Multiplies every amplitude by the sign attached to its label.
    pub fn apply_diagonal_phase<F>(&self, phase_of: F) -> Self
    where
        F: Fn(&BasisLabel) -> Phase,
    {
        let entries = self
            .entries
            .iter()
            .map(|(l, a)| match phase_of(l) {
                Phase::Plus => (*l, *a),
                Phase::Minus => (*l, -*a),
            })
            .collect();
        Self { entries, normalized: self.normalized }
    }

    /// Applies the linear map that sends each basis label to the listed
    /// superposition.
    pub fn apply_linear<F>(&self, op: F, kind: OperatorKind) -> Result<Self>
    where
        F: Fn(&BasisLabel) -> Vec<(BasisLabel, Complex<T>)>,
    {
        self.try_apply_linear(|l| Ok(op(l)), kind)
    }

    /// As [`apply_linear`](Self::apply_linear), for operators that can reject
    /// a label.
    pub fn try_apply_linear<F>(&self, op: F, kind: OperatorKind) -> Result<Self>
    where
        F: Fn(&BasisLabel) -> Result<Vec<(BasisLabel, Complex<T>)>>,
    {
        let mut acc: BTreeMap<BasisLabel, Complex<T>> = BTreeMap::new();
        for (label, amp) in &self.entries {
            for (image, coeff) in op(label)? {
                *acc.entry(image).or_default() += *amp * coeff;
            }
        }
        let mut out = Self { entries: acc, normalized: false };
        out.prune();
        if kind == OperatorKind::Unitary {
            let before = self.norm_sqr();
            let after = out.norm_sqr();
            let scale = T::one().max(before);
            if (after - before).abs() > T::lit(T::NORM_TOL) * scale {
                return Err(Error::NormDrift { before: before.to_f64_lossy(), after: after.to_f64_lossy() });
            }
            out.normalized = self.normalized;
        }
        Ok(out)
    }

    /// Keeps only the labels accepted by `keep`.
    pub fn project<F>(&self, keep: F) -> Self
    where
        F: Fn(&BasisLabel) -> bool,
    {
        let entries = self.entries.iter().filter(|(l, _)| keep(l)).map(|(l, a)| (*l, *a)).collect();
        Self { entries, normalized: false }
    }

    /// Outcome probabilities of a computational-basis measurement, grouped
    /// by `classify`.
    pub fn measure_distribution<K, F>(&self, classify: F) -> Result<BTreeMap<K, T>>
    where
        K: Ord,
        F: Fn(&BasisLabel) -> K,
    {
        let n = self.norm_sqr();
        if (n - T::one()).abs() > T::lit(T::NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: n.to_f64_lossy() });
        }
        let mut out = BTreeMap::new();
        for (label, amp) in &self.entries {
            *out.entry(classify(label)).or_insert_with(T::zero) += amp.norm_sqr();
        }
        Ok(out)
    }

    /// One `label\tre\tim` line per entry in canonical label order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (label, amp) in &self.entries {
            out.push_str(&format!("{label}\t{}\t{}\n", fmt17(amp.re.to_f64_lossy()), fmt17(amp.im.to_f64_lossy())));
        }
        out
    }

    /// Inverse of [`dump`](Self::dump).
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (idx, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let line_no = idx + 1;
            let parse_err = |reason: String| Error::Parse { line: line_no, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("expected 3 fields, found {}", fields.len())));
            }
            let label: BasisLabel = fields[0].parse().map_err(parse_err)?;
            let re: f64 = fields[1].parse().map_err(|e| parse_err(format!("{e}")))?;
            let im: f64 = fields[2].parse().map_err(|e| parse_err(format!("{e}")))?;
            terms.push((label, Complex::new(T::lit(re), T::lit(im))));
        }
        Ok(Self::from_amplitudes(terms))
    }
}
