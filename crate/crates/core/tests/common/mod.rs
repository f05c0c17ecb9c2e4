#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex;
use ordsearch::lowerbound::QueryAlgorithm;
use ordsearch::oracle::{apply_query, OrderedInstance};
use ordsearch::qcore::{BasisLabel, OperatorKind};
use ordsearch::{Result, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random real orthogonal matrix, row-major.
pub fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let m = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let q = m.qr().q();
    (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).map(|(r, c)| q[(r, c)]).collect()
}

/// `(U O)^T U` with seeded random orthogonal `U`s on `workspace * (n + 1)`
/// labels `|z; i>`, `i = n` being the idle index.
pub struct RandomAlgorithm {
    pub n: usize,
    pub t: usize,
    pub workspace: usize,
    unitaries: Vec<Vec<f64>>,
}

impl RandomAlgorithm {
    pub fn new(n: usize, t: usize, workspace: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = workspace * (n + 1);
        let unitaries = (0..=t).map(|_| random_orthogonal(dim, &mut rng)).collect();
        Self { n, t, workspace, unitaries }
    }

    fn dim(&self) -> usize {
        self.workspace * (self.n + 1)
    }

    fn label(&self, k: usize) -> BasisLabel {
        BasisLabel::gen((k / (self.n + 1)) as u64, k % (self.n + 1))
    }

    fn index(&self, l: &BasisLabel) -> usize {
        let g = l.as_gen().expect("general-model label");
        g.z as usize * (self.n + 1) + g.i
    }

    pub fn apply_unitary(&self, k: usize, state: &State) -> Result<State> {
        let u = &self.unitaries[k];
        let dim = self.dim();
        state.apply_linear(
            |l| {
                let col = self.index(l);
                (0..dim).map(|r| (self.label(r), Complex::new(u[r * dim + col], 0.0))).collect()
            },
            OperatorKind::Unitary,
        )
    }
}

impl QueryAlgorithm<f64> for RandomAlgorithm {
    fn list_len(&self) -> usize {
        self.n
    }

    fn query_count(&self) -> usize {
        self.t
    }

    fn opening_state(&self, _: &OrderedInstance) -> Result<State> {
        self.apply_unitary(0, &State::basis(BasisLabel::gen(0, 0)))
    }

    fn step(&self, j: usize, state: &State, inst: &OrderedInstance) -> Result<State> {
        self.apply_unitary(j + 1, &apply_query(state, inst)?)
    }

    fn read_answer(&self, label: &BasisLabel) -> Option<usize> {
        label.as_gen().map(|g| g.i).filter(|&i| i < self.n)
    }
}
