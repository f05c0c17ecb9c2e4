use num_complex::Complex;
use rayon::prelude::*;

use super::{lemma_bound, weighted_overlap, WeightSpec};
use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::oracle::{enumerate_instances, OrderedInstance};
use crate::qcore::{BasisLabel, SparseState};
use crate::scalar::Real;

/// An algorithm of the form `(U O)^T U` run on every instance of one list
/// length.
///
/// `opening_state` is the state the first query acts on, `U|0>` for an
/// algorithm started from scratch; `step(j, ..)` applies the `(j+1)`-th
/// query followed by the unitary after it. Inside `step` only the query may
/// look at the instance.
pub trait QueryAlgorithm<T: Real>: Sync {
    fn list_len(&self) -> usize;

    /// Number of queries `T`.
    fn query_count(&self) -> usize;

    /// State before the first query. Algorithms resuming from earlier rounds
    /// may start from an instance-dependent state.
    fn opening_state(&self, inst: &OrderedInstance) -> Result<SparseState<T>>;

    fn step(&self, j: usize, state: &SparseState<T>, inst: &OrderedInstance) -> Result<SparseState<T>>;

    /// Answer encoded by a final-state basis label.
    fn read_answer(&self, label: &BasisLabel) -> Option<usize>;
}

/// States `psi^0, ..., psi^T` for one instance.
pub fn evolve<T: Real, A: QueryAlgorithm<T> + ?Sized>(alg: &A, inst: &OrderedInstance) -> Result<Vec<SparseState<T>>> {
    let mut states = Vec::with_capacity(alg.query_count() + 1);
    let mut psi = alg.opening_state(inst)?.into_normalized()?;
    for j in 0..alg.query_count() {
        let next = alg.step(j, &psi, inst)?.into_normalized()?;
        states.push(std::mem::replace(&mut psi, next));
    }
    states.push(psi);
    Ok(states)
}

/// `result[j][a]` is `psi_a^j`. Instances run in parallel; results are
/// assembled in answer order.
pub fn simulate_all<T: Real, A: QueryAlgorithm<T> + ?Sized>(alg: &A) -> Result<Vec<Vec<SparseState<T>>>> {
    let per_instance: Vec<Vec<SparseState<T>>> =
        enumerate_instances(alg.list_len()).par_iter().map(|inst| evolve(alg, inst)).collect::<Result<_>>()?;
    let steps = alg.query_count() + 1;
    let mut by_step: Vec<Vec<SparseState<T>>> = (0..steps).map(|_| Vec::with_capacity(per_instance.len())).collect();
    for run in per_instance {
        for (j, psi) in run.into_iter().enumerate() {
            by_step[j].push(psi);
        }
    }
    Ok(by_step)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationOutcome<T: Real> {
    /// Most likely measured answer; `None` if the dominant outcome encodes
    /// no answer.
    pub answer_found: Option<usize>,
    pub probability: T,
    pub queries: usize,
}

/// Runs the algorithm on one instance and measures the final state.
pub fn simulate<T: Real, A: QueryAlgorithm<T> + ?Sized>(
    alg: &A,
    inst: &OrderedInstance,
) -> Result<SimulationOutcome<T>> {
    let states = evolve(alg, inst)?;
    let last = states.last().expect("at least the opening state");
    let dist = last.measure_distribution(|l| alg.read_answer(l))?;
    let (answer_found, probability) =
        dist.into_iter().fold((None, T::zero()), |best, (k, p)| if p > best.1 { (k, p) } else { best });
    Ok(SimulationOutcome { answer_found, probability, queries: alg.query_count() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryStep<T: Real> {
    pub j: usize,
    pub w: Complex<T>,
    /// `W_j - W_{j+1}`; absent on the final step.
    pub drop: Option<Complex<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord<T: Real> {
    pub n: usize,
    /// `pi n`, the per-query drop cap for ordered search.
    pub bound: T,
    pub steps: Vec<TrajectoryStep<T>>,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn initial_weight(&self) -> Complex<T> {
        self.steps[0].w
    }

    pub fn final_weight(&self) -> Complex<T> {
        self.steps[self.steps.len() - 1].w
    }

    /// `|(W_0 - W_T) - sum_j (W_j - W_{j+1})|`.
    pub fn telescoping_residual(&self) -> T {
        let total: Complex<T> = self.steps.iter().filter_map(|s| s.drop).fold(Complex::default(), |a, d| a + d);
        (self.initial_weight() - self.final_weight() - total).norm()
    }

    pub fn max_drop(&self) -> T {
        self.steps.iter().filter_map(|s| s.drop).fold(T::zero(), |m, d| m.max(d.norm()))
    }

    /// Steps whose drop exceeds `bound + tol`.
    pub fn violations(&self, tol: T) -> Vec<usize> {
        self.steps.iter().filter(|s| s.drop.is_some_and(|d| d.norm() > self.bound + tol)).map(|s| s.j).collect()
    }

    /// `j,W_re,W_im,drop_abs,bound` with an empty `drop_abs` on the last row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,W_re,W_im,drop_abs,bound\n");
        for s in &self.steps {
            let drop = s.drop.map(|d| fmt17(d.norm().to_f64_lossy())).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.j,
                fmt17(s.w.re.to_f64_lossy()),
                fmt17(s.w.im.to_f64_lossy()),
                drop,
                fmt17(self.bound.to_f64_lossy())
            ));
        }
        out
    }
}

/// Simulates every instance and records `W_j` after each query.
pub fn run_trajectory<T: Real, A: QueryAlgorithm<T> + ?Sized>(
    alg: &A,
    w: &WeightSpec<T>,
) -> Result<TrajectoryRecord<T>> {
    let n = alg.list_len();
    if w.n() != n {
        return Err(Error::StateCount { expected: n, got: w.n() });
    }
    let by_step = simulate_all(alg)?;
    let weights: Vec<Complex<T>> = by_step.iter().map(|states| weighted_overlap(states, w)).collect::<Result<_>>()?;
    let steps = weights
        .iter()
        .enumerate()
        .map(|(j, &wj)| TrajectoryStep { j, w: wj, drop: weights.get(j + 1).map(|&next| wj - next) })
        .collect();
    Ok(TrajectoryRecord { n, bound: lemma_bound(n), steps })
}
