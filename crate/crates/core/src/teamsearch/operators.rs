//! The interval operators `U^(s)`, `V^(s)`, the mixed query `O'` and the
//! one-round combine built from them.

use std::collections::BTreeSet;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::oracle::{apply_query, OrderedInstance};
use crate::qcore::{BasisLabel, Interval, OperatorKind, SparseState, TeamLabel};
use crate::scalar::Real;

/// Shape of a team: `computers` searchers sharing `sublists` sublists of
/// `2 * computers` positions each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TeamConfig {
    computers: usize,
    sublists: usize,
}

impl TeamConfig {
    pub fn new(computers: usize, sublists: usize) -> Result<Self> {
        if !computers.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { what: "computer count", value: computers });
        }
        if sublists == 0 {
            return Err(Error::InvalidLayout("at least one sublist is required".into()));
        }
        if 2 * computers * sublists >= 1 << 31 {
            return Err(Error::InvalidLayout("list too long".into()));
        }
        Ok(Self { computers, sublists })
    }

    /// Configuration used for the full quantum runs: four computers, with a
    /// single sublist at length 8 and four sublists at length 32.
    pub fn for_list_len(n: usize) -> Result<Self> {
        match n {
            8 => Self::new(4, 1),
            32 => Self::new(4, 4),
            _ => Err(Error::InvalidLayout(format!("team search runs at list length 8 or 32, not {n}"))),
        }
    }

    pub fn computers(&self) -> usize {
        self.computers
    }

    pub fn sublists(&self) -> usize {
        self.sublists
    }

    pub fn sublist_len(&self) -> usize {
        2 * self.computers
    }

    pub fn list_len(&self) -> usize {
        self.sublist_len() * self.sublists
    }
}

fn team_label(label: &BasisLabel, context: &'static str) -> Result<TeamLabel> {
    label.as_team().ok_or(Error::WrongLabel { label: *label, context })
}

fn check_power_of_two(s: usize) -> Result<()> {
    if s.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo { what: "operator size", value: s })
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `U^(s)`: Hadamard on the bit of every label whose interval has length `s`.
pub fn op_u<T: Real>(s: usize, state: &SparseState<T>) -> Result<SparseState<T>> {
    check_power_of_two(s)?;
    let h = T::FRAC_1_SQRT_2();
    state.try_apply_linear(
        |label| {
            let t = team_label(label, "U^(s)")?;
            if t.interval.len() != s {
                return Ok(vec![(*label, real(T::one()))]);
            }
            let zero = BasisLabel::Team(TeamLabel { bit: false, interval: t.interval });
            let one = BasisLabel::Team(TeamLabel { bit: true, interval: t.interval });
            let sign = if t.bit { -h } else { h };
            Ok(vec![(zero, real(h)), (one, real(sign))])
        },
        OperatorKind::Unitary,
    )
}

/// Image of a label under `V^(s)`: a bit of 1 keeps the lower half, 0 the
/// upper half, and the bit is reset.
fn v_image(s: usize, t: TeamLabel) -> Option<TeamLabel> {
    if t.interval.len() != s {
        return None;
    }
    let half = if t.bit { t.interval.lower_half() } else { t.interval.upper_half() };
    half.map(|interval| TeamLabel { bit: false, interval })
}

/// `V^(s)`: halves every length-`s` interval according to its bit.
///
/// Fails if an image lands on a label the state already holds, which would
/// make the map non-injective on this state.
pub fn op_v<T: Real>(s: usize, state: &SparseState<T>) -> Result<SparseState<T>> {
    check_power_of_two(s)?;
    if s < 2 {
        return Err(Error::OutOfRange { name: "s", value: s as f64, range: "[2, inf)" });
    }
    let mut untouched = BTreeSet::new();
    let mut moved = Vec::new();
    for label in state.labels() {
        let t = team_label(label, "V^(s)")?;
        match v_image(s, t) {
            Some(img) => moved.push((*label, BasisLabel::Team(img))),
            None => {
                untouched.insert(*label);
            }
        }
    }
    if let Some((from, onto)) = moved.iter().find(|(_, img)| untouched.contains(img)) {
        return Err(Error::Collision { s, from: *from, onto: *onto });
    }
    state.try_apply_linear(
        |label| {
            let t = team_label(label, "V^(s)")?;
            let image = v_image(s, t).map_or(*label, BasisLabel::Team);
            Ok(vec![(image, real(T::one()))])
        },
        OperatorKind::Unitary,
    )
}

const BIT_SHIFT: u32 = 1;
const HI_BITS: u32 = 32;

/// Packs a team label into the workspace tag of a `|z; i>` label.
fn encode(t: TeamLabel) -> u64 {
    let lo = t.interval.lo() as u64;
    let hi = t.interval.hi() as u64;
    ((lo << HI_BITS | hi) << BIT_SHIFT) | u64::from(t.bit)
}

fn decode(z: u64) -> Result<TeamLabel> {
    let bit = z & 1 == 1;
    let hi = ((z >> BIT_SHIFT) & ((1 << HI_BITS) - 1)) as usize;
    let lo = (z >> (BIT_SHIFT + HI_BITS)) as usize;
    Ok(TeamLabel { bit, interval: Interval::new(lo, hi)? })
}

/// Query index of a team label as seen by `O'`.
///
/// The least-knowing computer (interval covering a whole sublist) only
/// queries on its `|1>` branch; its `|0>` branch sits in the idle region
/// `i >= n`. Every other computer queries its interval's midpoint.
fn query_index(t: TeamLabel, cfg: &TeamConfig) -> Result<usize> {
    let label = BasisLabel::Team(t);
    let mid = t.interval.midpoint().ok_or(Error::UndefinedQueryIndex { label })?;
    if t.interval.len() == cfg.sublist_len() && !t.bit {
        Ok(cfg.list_len())
    } else {
        Ok(mid)
    }
}

/// First half of `O'`: rotate the least-knowing computer's bit into the
/// `|+>, |->` basis, then rename each label as `|z; i>` with its query index.
pub fn oprime_prepare<T: Real>(state: &SparseState<T>, cfg: &TeamConfig) -> Result<SparseState<T>> {
    let rotated = op_u(cfg.sublist_len(), state)?;
    rotated.try_apply_linear(
        |label| {
            let t = team_label(label, "O'")?;
            if t.interval.hi() >= cfg.list_len() {
                return Err(Error::WrongLabel { label: *label, context: "O' (interval outside the list)" });
            }
            Ok(vec![(BasisLabel::gen(encode(t), query_index(t, cfg)?), real(T::one()))])
        },
        OperatorKind::Unitary,
    )
}

/// Second half of `O'`: undo the renaming and the rotation.
pub fn oprime_finish<T: Real>(state: &SparseState<T>, cfg: &TeamConfig) -> Result<SparseState<T>> {
    let renamed = state.try_apply_linear(
        |label| {
            let g = label.as_gen().ok_or(Error::WrongLabel { label: *label, context: "O' finish" })?;
            Ok(vec![(BasisLabel::Team(decode(g.z)?), real(T::one()))])
        },
        OperatorKind::Unitary,
    )?;
    op_u(cfg.sublist_len(), &renamed)
}

/// `O'`: one oracle query that writes `x_q` into the least-knowing
/// computer's bit and returns `(-1)^{x_q}` as a phase to every other one.
pub fn op_oprime<T: Real>(state: &SparseState<T>, inst: &OrderedInstance, cfg: &TeamConfig) -> Result<SparseState<T>> {
    let prepared = oprime_prepare(state, cfg)?;
    let queried = apply_query(&prepared, inst)?;
    oprime_finish(&queried, cfg)
}

/// A named intermediate state of the combine.
#[derive(Clone, Debug)]
pub struct Stage<T: Real> {
    pub name: String,
    pub state: SparseState<T>,
}

/// The cascade after the query: `V^(2r)`, then `U^(s) V^(s)` for
/// `s = r, r/2, ..., 2`.
fn cascade<T: Real>(queried: SparseState<T>, cfg: &TeamConfig, stages: &mut Vec<Stage<T>>) -> Result<SparseState<T>> {
    let mut s = cfg.sublist_len();
    let mut state = op_v(s, &queried)?;
    stages.push(Stage { name: format!("V^({s})"), state: state.clone() });
    while s > 2 {
        s /= 2;
        state = op_u(s, &state)?;
        stages.push(Stage { name: format!("U^({s})"), state: state.clone() });
        state = op_v(s, &state)?;
        stages.push(Stage { name: format!("V^({s})"), state: state.clone() });
    }
    Ok(state)
}

/// Every stage of one round, starting with the given state.
pub fn run_iteration_traced<T: Real>(
    state: &SparseState<T>,
    inst: &OrderedInstance,
    cfg: &TeamConfig,
) -> Result<Vec<Stage<T>>> {
    let mut stages = vec![Stage { name: "opening".into(), state: state.clone() }];
    let queried = op_oprime(state, inst, cfg)?;
    stages.push(Stage { name: "O'".into(), state: queried.clone() });
    cascade(queried, cfg, &mut stages)?;
    Ok(stages)
}

/// One round: `O'` followed by the `V`/`U` cascade.
pub fn run_iteration<T: Real>(
    state: &SparseState<T>,
    inst: &OrderedInstance,
    cfg: &TeamConfig,
) -> Result<SparseState<T>> {
    let queried = op_oprime(state, inst, cfg)?;
    let mut sink = Vec::new();
    cascade(queried, cfg, &mut sink)
}

/// Continues a round from the state right after the raw query.
pub(super) fn finish_round<T: Real>(queried: &SparseState<T>, cfg: &TeamConfig) -> Result<SparseState<T>> {
    let after = oprime_finish(queried, cfg)?;
    let mut sink = Vec::new();
    cascade(after, cfg, &mut sink)
}

/// Stage dumps as `(file name, contents)` pairs, one per stage.
pub fn trace_files<T: Real>(stages: &[Stage<T>]) -> Vec<(String, String)> {
    stages
        .iter()
        .enumerate()
        .map(|(k, st)| {
            let slug: String = st.name.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
            (format!("{k:02}_{slug}.tsv"), st.state.dump())
        })
        .collect()
}
