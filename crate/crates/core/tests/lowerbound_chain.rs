mod common;

use common::RandomAlgorithm;
use num_complex::Complex;
use ordsearch::lowerbound::{
    drop_chain_report, lemma_bound, run_trajectory, simulate_all, total_weight, verify_drop_chain, weighted_overlap,
    QueryAlgorithm, WeightSpec,
};
use ordsearch::oracle::{apply_query, enumerate_instances};
use ordsearch::qcore::BasisLabel;
use ordsearch::teamsearch::{EmbeddedBinarySearch, TeamSearch};
use ordsearch::{State, Weights};

/// Checks every link of the chain and the exact expansion at every step.
fn check_all_steps<A: QueryAlgorithm<f64>>(alg: &A) {
    let n = alg.list_len();
    let w = Weights::ordered_search(n);
    let by_step = simulate_all(alg).unwrap();
    for j in 0..alg.query_count() {
        let before = &by_step[j];
        let queried: Vec<State> =
            before.iter().zip(enumerate_instances(n)).map(|(s, inst)| apply_query(s, &inst).unwrap()).collect();
        let report = verify_drop_chain(before, &queried, &w).unwrap();
        report.check_expansion(1e-8).unwrap();
        // The unitary after the query is shared, so the drop is the same.
        let full = drop_chain_report(before, &by_step[j + 1], &w).unwrap();
        assert!((full.drop - report.drop).norm() < 1e-9, "n = {n}, j = {j}");
        assert!(report.d <= lemma_bound::<f64>(n) + 1e-8);
    }
}

#[test]
fn random_algorithms_obey_the_chain() {
    for (k, n) in [2, 4, 8, 16, 32].into_iter().enumerate() {
        for seed in 0..3 {
            let alg = RandomAlgorithm::new(n, 3, 2, 1000 * k as u64 + seed);
            check_all_steps(&alg);
        }
    }
}

#[test]
fn structured_algorithms_obey_the_chain() {
    for n in [2, 4, 8, 16, 32] {
        check_all_steps(&EmbeddedBinarySearch::new(n).unwrap());
    }
    for n in [8, 32] {
        check_all_steps(&TeamSearch::for_list_len(n).unwrap());
    }
}

#[test]
fn binary_search_drop_is_positive() {
    let alg = EmbeddedBinarySearch::new(8).unwrap();
    let by_step = simulate_all::<f64, _>(&alg).unwrap();
    let report = verify_drop_chain(&by_step[0], &by_step[1], &Weights::ordered_search(8)).unwrap();
    assert!(report.d > 0.0);
}

#[test]
fn concentrated_states_obey_the_chain() {
    // Every answer puts all its mass on querying its own answer position.
    let n = 4;
    let before: Vec<State> = (0..n).map(|a| State::basis(BasisLabel::gen(0, a))).collect();
    let after: Vec<State> =
        before.iter().zip(enumerate_instances(n)).map(|(s, inst)| apply_query(s, &inst).unwrap()).collect();
    let report = verify_drop_chain(&before, &after, &Weights::ordered_search(n)).unwrap();
    assert!(report.b <= 4.0 * std::f64::consts::PI);
    report.check_expansion(1e-8).unwrap();
}

#[test]
fn shared_unitaries_leave_weight_unchanged() {
    let n = 8;
    let alg = RandomAlgorithm::new(n, 2, 2, 7);
    let w = Weights::ordered_search(n);
    let by_step = simulate_all(&alg).unwrap();
    let extra = RandomAlgorithm::new(n, 0, 2, 99);
    for states in &by_step {
        let rotated: Vec<State> = states.iter().map(|s| extra.apply_unitary(0, s).unwrap()).collect();
        let w0 = weighted_overlap(states, &w).unwrap();
        let w1 = weighted_overlap(&rotated, &w).unwrap();
        assert!((w0 - w1).norm() < 1e-12);
    }
}

#[test]
fn telescoping_with_custom_weights() {
    let n = 6;
    let alg = RandomAlgorithm::new(n, 4, 2, 3);
    let w = WeightSpec::custom(n, |a, b| ((a * 7 + b * 3) % 5) as f64 / 4.0);
    let rec = run_trajectory(&alg, &w).unwrap();
    assert!(rec.telescoping_residual() < 1e-9);
    // Lemma chain needs the ordered-search weights.
    let by_step = simulate_all(&alg).unwrap();
    assert!(drop_chain_report(&by_step[0], &by_step[1], &w).is_err());
}

#[test]
fn initial_weight_of_any_algorithm() {
    for n in [2, 5, 16] {
        let rec = run_trajectory(&RandomAlgorithm::new(n, 1, 1, 11), &Weights::ordered_search(n)).unwrap();
        let w0 = rec.initial_weight();
        assert!((w0 - Complex::new(total_weight::<f64>(n), 0.0)).norm() < 1e-9);
    }
}
