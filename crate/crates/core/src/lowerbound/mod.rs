//! Weighted all-pairs inner products and the query lower bound they imply.
//!
//! For per-answer states `psi_a` the weighted overlap is
//! `W = sum_{a,b} w(a,b) <psi_a|psi_b>`. It starts at the total weight,
//! must reach (near) zero for a correct algorithm, and each query can lower
//! it only by a bounded amount. The submodules simulate that trajectory and
//! check every step of the per-query bound for ordered search.

mod chain;
mod matrix;
mod trajectory;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::SparseState;
use crate::scalar::Real;

pub use chain::{drop_chain_report, gen_query_index, mass_profile, verify_drop_chain, ChainReport, MassProfile};
pub use matrix::{
    hankel_matrix, hilbert_matrix, power_iteration_norm, spectral_norm, symmetric_eigenvalues, NormMethod, SymMatrix,
    EIGENSOLVE_MAX_DIM, POWER_MAX_ITER, POWER_TOL,
};
pub use trajectory::{
    evolve, run_trajectory, simulate, simulate_all, QueryAlgorithm, SimulationOutcome, TrajectoryRecord, TrajectoryStep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `w(a, b) = 1 / (b - a)` for `a < b`, zero otherwise.
    OrderedSearch,
    Custom,
}

/// Non-negative weight on pairs of answers `0..n`.
#[derive(Clone)]
pub struct WeightSpec<T: Real> {
    n: usize,
    kind: WeightKind,
    weight: Arc<dyn Fn(usize, usize) -> T + Send + Sync>,
}

impl<T: Real> fmt::Debug for WeightSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSpec").field("n", &self.n).field("kind", &self.kind).finish()
    }
}

impl<T: Real> WeightSpec<T> {
    /// Inverse answer distance, the weight used for ordered search.
    pub fn ordered_search(n: usize) -> Self {
        Self {
            n,
            kind: WeightKind::OrderedSearch,
            weight: Arc::new(|a, b| if a < b { T::one() / T::from_usize(b - a) } else { T::zero() }),
        }
    }

    /// An arbitrary weight. Negative values are clamped to zero.
    pub fn custom<F>(n: usize, weight: F) -> Self
    where
        F: Fn(usize, usize) -> T + Send + Sync + 'static,
    {
        Self { n, kind: WeightKind::Custom, weight: Arc::new(move |a, b| weight(a, b).max(T::zero())) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn weight(&self, a: usize, b: usize) -> T {
        (self.weight)(a, b)
    }

    /// Sum of the weight over all pairs, by direct enumeration.
    pub fn total(&self) -> T {
        let mut sum = T::zero();
        let mut carry = T::zero();
        for a in 0..self.n {
            for b in 0..self.n {
                // Neumaier compensation: the double sum has O(n^2) terms.
                let x = self.weight(a, b);
                let t = sum + x;
                if sum.abs() >= x.abs() {
                    carry += (sum - t) + x;
                } else {
                    carry += (x - t) + sum;
                }
                sum = t;
            }
        }
        sum + carry
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic<T: Real>(n: usize) -> T {
    // Smallest terms first.
    (1..=n).rev().fold(T::zero(), |acc, k| acc + T::one() / T::from_usize(k))
}

/// Initial weighted overlap for ordered search, `n H_n - n`.
pub fn total_weight<T: Real>(n: usize) -> T {
    let n_t = T::from_usize(n);
    n_t * harmonic::<T>(n) - n_t
}

/// `sum_{a,b} w(a,b) <psi_a|psi_b>`.
pub fn weighted_overlap<T: Real>(states: &[SparseState<T>], w: &WeightSpec<T>) -> Result<Complex<T>> {
    if states.len() != w.n() {
        return Err(Error::StateCount { expected: w.n(), got: states.len() });
    }
    let mut acc = Complex::default();
    for (a, psi_a) in states.iter().enumerate() {
        for (b, psi_b) in states.iter().enumerate() {
            let weight = w.weight(a, b);
            if weight != T::zero() {
                acc += psi_a.inner_product(psi_b) * weight;
            }
        }
    }
    Ok(acc)
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps >= T::zero() && eps <= T::lit(0.5)) {
        return Err(Error::OutOfRange { name: "eps", value: eps.to_f64_lossy(), range: "[0, 0.5]" });
    }
    Ok(())
}

/// Largest overlap `|<x|y>|` two states may have and still be told apart
/// with error at most `eps`: `2 sqrt(eps (1 - eps))`.
pub fn distinguishability_threshold<T: Real>(eps: T) -> Result<T> {
    check_eps(eps)?;
    Ok(T::lit(2.0) * (eps * (T::one() - eps)).sqrt())
}

/// Queries needed to bring an initial weight `w` down when each query
/// removes at most `delta`: `(1 - 2 sqrt(eps (1 - eps))) w / delta`.
pub fn query_lower_bound<T: Real>(w: T, delta: T, eps: T) -> Result<T> {
    if delta.is_nan() || delta <= T::zero() {
        return Err(Error::OutOfRange { name: "delta", value: delta.to_f64_lossy(), range: "(0, inf)" });
    }
    if w.is_nan() || w < T::zero() {
        return Err(Error::OutOfRange { name: "W", value: w.to_f64_lossy(), range: "[0, inf)" });
    }
    Ok((T::one() - distinguishability_threshold(eps)?) * w / delta)
}

/// Lower bound on queries for ordered search of length `n` with error `eps`:
/// `(1 - 2 sqrt(eps (1 - eps))) (H_n - 1) / pi`.
pub fn ordered_search_bound<T: Real>(n: usize, eps: T) -> Result<T> {
    if n < 2 {
        return Err(Error::OutOfRange { name: "n", value: n as f64, range: "[2, inf)" });
    }
    Ok((T::one() - distinguishability_threshold(eps)?) * (harmonic::<T>(n) - T::one()) / T::PI())
}

/// Per-query drop cap for ordered search, `pi n`.
pub fn lemma_bound<T: Real>(n: usize) -> T {
    T::PI() * T::from_usize(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::BasisLabel;
    use approx::assert_abs_diff_eq;

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic::<f64>(1), 1.0);
        assert_eq!(harmonic::<f64>(2), 1.5);
        // 1 + 1/2 + ... + 1/8 = 761/280
        assert_abs_diff_eq!(harmonic::<f64>(8), 761.0 / 280.0, epsilon = 1e-12);
        assert_abs_diff_eq!(harmonic::<f64>(8), 2.717857142857143, epsilon = 1e-12);
        for n in 2..2000 {
            let h = harmonic::<f64>(n);
            let ln = (n as f64).ln();
            assert!(ln < h && h < ln + 1.0);
        }
    }

    #[test]
    fn total_weight_values() {
        assert_eq!(total_weight::<f64>(1), 0.0);
        assert_abs_diff_eq!(total_weight::<f64>(2), 1.0, epsilon = 1e-15);
        let brute: f64 = (0..8).flat_map(|a| (a + 1..8).map(move |b| 1.0 / (b - a) as f64)).sum();
        assert_abs_diff_eq!(total_weight::<f64>(8), brute, epsilon = 1e-12);
        assert_abs_diff_eq!(total_weight::<f64>(8), 13.742857142857142, epsilon = 1e-12);
        assert_abs_diff_eq!(WeightSpec::<f64>::ordered_search(8).total(), brute, epsilon = 1e-12);
    }

    #[test]
    fn ordered_weight_is_upper_triangular() {
        let w = WeightSpec::<f64>::ordered_search(5);
        assert_eq!(w.weight(1, 3), 0.5);
        assert_eq!(w.weight(3, 1), 0.0);
        assert_eq!(w.weight(2, 2), 0.0);
        let c = WeightSpec::<f64>::custom(3, |a, b| a as f64 - b as f64);
        assert_eq!(c.weight(0, 2), 0.0);
        assert_eq!(c.weight(2, 0), 2.0);
        assert_eq!(c.kind(), WeightKind::Custom);
    }

    #[test]
    fn overlap_cases() {
        let n = 5;
        let w = WeightSpec::<f64>::ordered_search(n);
        let same: Vec<_> = (0..n).map(|_| SparseState::basis(BasisLabel::gen(0, 0))).collect();
        assert_abs_diff_eq!(weighted_overlap(&same, &w).unwrap().re, total_weight::<f64>(n), epsilon = 1e-12);

        let ortho: Vec<_> = (0..n).map(|a| SparseState::basis(BasisLabel::gen(a as u64, 0))).collect();
        assert_eq!(weighted_overlap(&ortho, &w).unwrap(), Complex::default());

        // <psi_0|psi_1> = 0.5 with weight 1 on the only pair.
        let s = 0.75f64.sqrt();
        let pair = vec![
            SparseState::basis(BasisLabel::gen(0, 0)),
            SparseState::from_real([(BasisLabel::gen(0, 0), 0.5), (BasisLabel::gen(1, 0), s)]),
        ];
        let w2 = WeightSpec::<f64>::ordered_search(2);
        assert_abs_diff_eq!(weighted_overlap(&pair, &w2).unwrap().re, 0.5, epsilon = 1e-15);

        assert!(matches!(weighted_overlap(&pair, &w), Err(Error::StateCount { .. })));
    }

    #[test]
    fn threshold_values() {
        assert_eq!(distinguishability_threshold(0.0f64).unwrap(), 0.0);
        assert_eq!(distinguishability_threshold(0.5f64).unwrap(), 1.0);
        assert_abs_diff_eq!(distinguishability_threshold(0.1f64).unwrap(), 0.6, epsilon = 1e-15);
        assert!(distinguishability_threshold(0.6f64).is_err());
        assert!(distinguishability_threshold(-0.1f64).is_err());
        assert!(distinguishability_threshold(f64::NAN).is_err());
    }

    #[test]
    fn general_bound_values() {
        assert_eq!(query_lower_bound(3.0f64, 2.0, 0.5).unwrap(), 0.0);
        assert_eq!(query_lower_bound(2.5f64, 2.5, 0.0).unwrap(), 1.0);
        let w = total_weight::<f64>(8);
        let b = query_lower_bound(w, 8.0 * std::f64::consts::PI, 0.0).unwrap();
        // (8 H_8 - 8) / (8 pi) with H_8 = 761/280
        assert_abs_diff_eq!(b, (8.0 * 761.0 / 280.0 - 8.0) / (8.0 * std::f64::consts::PI), epsilon = 1e-12);
        assert_abs_diff_eq!(b, 0.5468, epsilon = 1e-4);
        assert!(query_lower_bound(1.0f64, 0.0, 0.0).is_err());
        assert!(query_lower_bound(1.0f64, -1.0, 0.0).is_err());
    }

    #[test]
    fn ordered_bound_values() {
        assert_eq!(ordered_search_bound(7, 0.5f64).unwrap(), 0.0);
        assert_abs_diff_eq!(ordered_search_bound(2, 0.0f64).unwrap(), 0.5 / std::f64::consts::PI, epsilon = 1e-15);
        assert_abs_diff_eq!(ordered_search_bound(2, 0.0f64).unwrap(), 0.15915, epsilon = 1e-5);
        let n = 1_000_000;
        let lhs = ordered_search_bound(n, 0.0f64).unwrap();
        let rhs = ((n as f64).ln() - 1.0) / std::f64::consts::PI;
        assert_abs_diff_eq!(rhs, 4.079, epsilon = 1e-3);
        assert!(lhs > rhs);
        assert!(ordered_search_bound(1, 0.0f64).is_err());
    }

    #[test]
    fn single_precision_paths() {
        assert!((harmonic::<f32>(8) - 2.717_857).abs() < 1e-5);
        assert!((ordered_search_bound(2, 0.0f32).unwrap() - 0.159_155).abs() < 1e-5);
    }
}
