//! Step-by-step check of the per-query drop bound for ordered search.
//!
//! For states `psi_a` right before a query and `psi_a'` right after it (and
//! after any shared unitary), the chain is
//!
//! ```text
//! D = |W - W'| <= S = 2 sum_d sum_{i<d} gamma_i delta_{d-i-1} / d
//!              <= B = 2 |gamma| |M| |delta|
//!              <= pi N
//! ```
//!
//! where `beta_{a,i}` is the part of `psi_a` querying index `i`,
//! `gamma_i^2 = sum_a |beta_{a,a+i}|^2`, `delta_i^2 = sum_a |beta_{a,a-i-1}|^2`
//! and `M` is the `(N-1) x (N-1)` Hankel truncation of the Hilbert matrix.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::{hankel_matrix, lemma_bound, spectral_norm, weighted_overlap, WeightKind, WeightSpec};
use crate::error::{ChainLink, Error, Result};
use crate::qcore::{BasisLabel, SparseState};
use crate::scalar::Real;

/// Query index of a general-model label `|z; i>`.
pub fn gen_query_index(label: &BasisLabel) -> Option<usize> {
    label.as_gen().map(|g| g.i)
}

#[derive(Clone, Debug)]
pub struct MassProfile<T: Real> {
    pub n: usize,
    /// `(answer, index) -> P_index |psi_answer>`, non-empty projections only.
    pub betas: BTreeMap<(usize, usize), SparseState<T>>,
    pub gammas: Vec<T>,
    pub deltas: Vec<T>,
}

impl<T: Real> MassProfile<T> {
    pub fn beta(&self, answer: usize, index: usize) -> Option<&SparseState<T>> {
        self.betas.get(&(answer, index))
    }

    pub fn total_mass(&self) -> T {
        self.betas.values().fold(T::zero(), |acc, b| acc + b.norm_sqr())
    }

    pub fn gamma_norm(&self) -> T {
        l2(&self.gammas)
    }

    pub fn delta_norm(&self) -> T {
        l2(&self.deltas)
    }

    fn beta_mass(&self, answer: usize, index: usize) -> T {
        self.beta(answer, index).map_or(T::zero(), |b| b.norm_sqr())
    }
}

fn l2<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt()
}

/// Splits each per-answer state by the oracle index its labels query.
pub fn mass_profile<T, F>(states: &[SparseState<T>], queried_index_of: F) -> Result<MassProfile<T>>
where
    T: Real,
    F: Fn(&BasisLabel) -> Option<usize>,
{
    let n = states.len();
    let mut betas = BTreeMap::new();
    for (a, psi) in states.iter().enumerate() {
        let norm_sqr = psi.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::lit(T::NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: norm_sqr.to_f64_lossy() });
        }
        let mut parts: BTreeMap<usize, Vec<(BasisLabel, Complex<T>)>> = BTreeMap::new();
        for (label, amp) in psi.iter() {
            let i = queried_index_of(label).ok_or(Error::UndefinedQueryIndex { label: *label })?;
            parts.entry(i).or_default().push((*label, *amp));
        }
        for (i, terms) in parts {
            betas.insert((a, i), SparseState::from_amplitudes(terms));
        }
    }
    let mut profile = MassProfile { n, betas, gammas: Vec::new(), deltas: Vec::new() };
    let len = n.saturating_sub(1);
    // Only indices inside the list can separate two instances.
    profile.gammas = (0..len)
        .map(|i| (0..n).filter(|a| a + i < n).fold(T::zero(), |acc, a| acc + profile.beta_mass(a, a + i)).sqrt())
        .collect();
    profile.deltas =
        (0..len).map(|i| (i + 1..n).fold(T::zero(), |acc, a| acc + profile.beta_mass(a, a - i - 1)).sqrt()).collect();
    Ok(profile)
}

#[derive(Clone, Debug)]
pub struct ChainReport<T: Real> {
    pub n: usize,
    /// `W_j - W_{j+1}`.
    pub drop: Complex<T>,
    /// `2 sum_{a<b} sum_{a<=i<b} <beta_{a,i}|beta_{b,i}> / (b-a)`.
    pub expansion: Complex<T>,
    /// `|drop|`.
    pub d: T,
    pub s: T,
    pub b: T,
    /// `pi N`.
    pub cap: T,
    pub hankel_norm: T,
    pub gamma_norm: T,
    pub delta_norm: T,
}

impl<T: Real> ChainReport<T> {
    /// Checks `D <= S <= B <= pi N` with slack `tol`, reporting the first
    /// link that fails.
    pub fn check(&self, tol: T) -> Result<()> {
        let links = [
            (ChainLink::TriangleInequality, self.d, self.s),
            (ChainLink::MatrixBound, self.s, self.b),
            (ChainLink::HilbertCap, self.b, self.cap),
        ];
        for (link, lhs, rhs) in links {
            if lhs.is_nan() || rhs.is_nan() || lhs > rhs + tol {
                return Err(Error::ChainViolation { link, lhs: lhs.to_f64_lossy(), rhs: rhs.to_f64_lossy() });
            }
        }
        Ok(())
    }

    /// Checks that the drop equals its sub-state expansion. This holds only
    /// when `after` is the query (plus a shared unitary) applied to `before`.
    pub fn check_expansion(&self, tol: T) -> Result<()> {
        let gap = (self.drop - self.expansion).norm();
        if gap.is_nan() || gap > tol {
            return Err(Error::ChainViolation {
                link: ChainLink::ExactIdentity,
                lhs: self.drop.re.to_f64_lossy(),
                rhs: self.expansion.re.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Computes every quantity of the chain without asserting it.
///
/// `before` must be in the general query model (`|z; i>` labels); `after`
/// may use any labels.
pub fn drop_chain_report<T: Real>(
    before: &[SparseState<T>],
    after: &[SparseState<T>],
    w: &WeightSpec<T>,
) -> Result<ChainReport<T>> {
    if w.kind() != WeightKind::OrderedSearch {
        return Err(Error::UnsupportedWeight);
    }
    let n = w.n();
    for states in [before, after] {
        if states.len() != n {
            return Err(Error::StateCount { expected: n, got: states.len() });
        }
    }
    let drop = weighted_overlap(before, w)? - weighted_overlap(after, w)?;
    let profile = mass_profile(before, gen_query_index)?;

    let two = T::lit(2.0);
    let mut expansion = Complex::default();
    for a in 0..n {
        for b in a + 1..n {
            let inv = T::one() / T::from_usize(b - a);
            for i in a..b {
                if let (Some(ba), Some(bb)) = (profile.beta(a, i), profile.beta(b, i)) {
                    expansion += ba.inner_product(bb) * inv;
                }
            }
        }
    }
    expansion *= two;

    let mut s = T::zero();
    for d in 1..n {
        let inv = T::one() / T::from_usize(d);
        for i in 0..d {
            s += inv * profile.gammas[i] * profile.deltas[d - i - 1];
        }
    }
    s *= two;

    let hankel_norm = spectral_norm(&hankel_matrix::<T>(n.saturating_sub(1)))?;
    let gamma_norm = profile.gamma_norm();
    let delta_norm = profile.delta_norm();
    Ok(ChainReport {
        n,
        drop,
        expansion,
        d: drop.norm(),
        s,
        b: two * gamma_norm * hankel_norm * delta_norm,
        cap: lemma_bound(n),
        hankel_norm,
        gamma_norm,
        delta_norm,
    })
}

/// [`drop_chain_report`] followed by [`ChainReport::check`] at the type's
/// chain tolerance.
pub fn verify_drop_chain<T: Real>(
    before: &[SparseState<T>],
    after: &[SparseState<T>],
    w: &WeightSpec<T>,
) -> Result<ChainReport<T>> {
    let report = drop_chain_report(before, after, w)?;
    report.check(T::lit(T::CHAIN_TOL))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{apply_query, enumerate_instances};

    type S = SparseState<f64>;

    fn g(z: u64, i: usize) -> BasisLabel {
        BasisLabel::gen(z, i)
    }

    #[test]
    fn idle_region_has_no_mass() {
        let n = 6;
        let states: Vec<S> = (0..n).map(|a| S::basis(g(a as u64, n))).collect();
        let p = mass_profile(&states, gen_query_index).unwrap();
        assert!(p.gammas.iter().chain(&p.deltas).all(|&x| x == 0.0));
        assert_eq!(p.gammas.len(), n - 1);
    }

    #[test]
    fn mass_on_own_answer() {
        let n = 4;
        let states: Vec<S> = (0..n).map(|a| S::basis(g(0, a))).collect();
        let p = mass_profile(&states, gen_query_index).unwrap();
        assert_eq!(p.gammas[0], 2.0);
        let p1 = mass_profile(&states[..1], gen_query_index).unwrap();
        assert!(p1.gammas.is_empty());
        // A single answer keeping all of its mass on its own index.
        let solo = vec![S::basis(g(0, 0)), S::basis(g(0, 5))];
        let p2 = mass_profile(&solo, gen_query_index).unwrap();
        assert_eq!(p2.gammas, vec![1.0]);
        assert_eq!(p2.deltas, vec![0.0]);
    }

    #[test]
    fn profile_rejects_bad_input() {
        let team = vec![S::basis(BasisLabel::team(false, 0, 1).unwrap())];
        assert!(matches!(mass_profile(&team, gen_query_index), Err(Error::UndefinedQueryIndex { .. })));
        let unnormalized = vec![S::from_real([(g(0, 0), 2.0)])];
        assert!(matches!(mass_profile(&unnormalized, gen_query_index), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn no_query_round_has_zero_drop() {
        let n = 5;
        let w = WeightSpec::ordered_search(n);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let states: Vec<S> = (0..n).map(|_| S::from_real([(g(0, 1), h), (g(1, 3), h)])).collect();
        let r = verify_drop_chain(&states, &states, &w).unwrap();
        assert_eq!(r.d, 0.0);
    }

    #[test]
    fn concentrated_states() {
        // Answer a puts all of its mass on index a.
        let n = 4;
        let w = WeightSpec::ordered_search(n);
        let before: Vec<S> = (0..n).map(|a| S::basis(g(0, a))).collect();
        let after: Vec<S> =
            enumerate_instances(n).iter().zip(&before).map(|(x, s)| apply_query(s, x).unwrap()).collect();
        let r = verify_drop_chain(&before, &after, &w).unwrap();
        assert!(r.b <= 4.0 * std::f64::consts::PI);

        // Shared state split over the indices near the answers.
        let h = 0.5f64;
        let shared = S::from_real((0..4).map(|i| (g(0, i), h)));
        let before: Vec<S> = (0..n).map(|_| shared.clone()).collect();
        let after: Vec<S> = enumerate_instances(n).iter().map(|x| apply_query(&shared, x).unwrap()).collect();
        let r = verify_drop_chain(&before, &after, &w).unwrap();
        assert!(r.d > 0.0);
        r.check_expansion(1e-12).unwrap();
    }

    #[test]
    fn custom_weights_are_rejected() {
        let w = WeightSpec::<f64>::custom(2, |_, _| 1.0);
        let s = vec![S::basis(g(0, 0)), S::basis(g(0, 0))];
        assert!(matches!(drop_chain_report(&s, &s, &w), Err(Error::UnsupportedWeight)));
    }

    #[test]
    fn check_names_failing_link() {
        let r = ChainReport::<f64> {
            n: 2,
            drop: Complex::new(1.0, 0.0),
            expansion: Complex::new(1.0, 0.0),
            d: 1.0,
            s: 0.5,
            b: 1.0,
            cap: 10.0,
            hankel_norm: 1.0,
            gamma_norm: 1.0,
            delta_norm: 0.5,
        };
        match r.check(1e-8) {
            Err(Error::ChainViolation { link: ChainLink::TriangleInequality, lhs, rhs }) => {
                assert_eq!((lhs, rhs), (1.0, 0.5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
