//! Dense symmetric matrices, Hilbert/Hankel constructors and spectral norms.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest dimension handled by the full Jacobi eigensolve; bigger matrices
/// go through power iteration.
pub const EIGENSOLVE_MAX_DIM: usize = 64;
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;

const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    Eigensolve,
    PowerIteration,
}

impl NormMethod {
    pub fn for_dim(n: usize) -> Self {
        if n <= EIGENSOLVE_MAX_DIM {
            NormMethod::Eigensolve
        } else {
            NormMethod::PowerIteration
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormMethod::Eigensolve => "jacobi",
            NormMethod::PowerIteration => "power",
        }
    }
}

/// Square symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T: Real> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    /// Builds the matrix from the entry rule for `k <= l`, mirrored below
    /// the diagonal.
    pub fn from_upper<F>(n: usize, entry: F) -> Self
    where
        F: Fn(usize, usize) -> T,
    {
        let mut data = vec![T::zero(); n * n];
        for k in 0..n {
            for l in k..n {
                let v = entry(k, l);
                data[k * n + l] = v;
                data[l * n + k] = v;
            }
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |k, l| if k == l { T::one() } else { T::zero() })
    }

    /// Validates squareness and exact symmetry.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSymmetric);
        }
        if (0..n).any(|k| (0..k).any(|l| rows[k][l] != rows[l][k])) {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize) -> T {
        self.data[k * self.n + l]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        self.rows().map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + *a * *b)).collect()
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        self.mul_vec(v).iter().zip(u).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
    }
}

/// `n x n` Hilbert matrix, entries `1 / (k + l + 1)`.
pub fn hilbert_matrix<T: Real>(n: usize) -> SymMatrix<T> {
    SymMatrix::from_upper(n, |k, l| T::one() / T::from_usize(k + l + 1))
}

/// `n x n` Hankel truncation of the Hilbert matrix: `1 / (k + l + 1)` when
/// `k + l < n`, zero past the anti-diagonal.
pub fn hankel_matrix<T: Real>(n: usize) -> SymMatrix<T> {
    SymMatrix::from_upper(n, |k, l| if k + l < n { T::one() / T::from_usize(k + l + 1) } else { T::zero() })
}

/// Induced 2-norm of a symmetric matrix.
pub fn spectral_norm<T: Real>(m: &SymMatrix<T>) -> Result<T> {
    match NormMethod::for_dim(m.dim()) {
        NormMethod::Eigensolve => Ok(symmetric_eigenvalues(m)?.into_iter().fold(T::zero(), |acc, l| acc.max(l.abs()))),
        NormMethod::PowerIteration => power_iteration_norm(m, T::lit(POWER_TOL), POWER_MAX_ITER),
    }
}

/// All eigenvalues by cyclic Jacobi rotations, in ascending order.
pub fn symmetric_eigenvalues<T: Real>(m: &SymMatrix<T>) -> Result<Vec<T>> {
    let n = m.dim();
    let mut a = m.data.clone();
    let frob = a.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
    let threshold = T::epsilon() * frob;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold {
                    a[p * n + q] = T::zero();
                    a[q * n + p] = T::zero();
                    continue;
                }
                rotated = true;
                let theta = (a[q * n + q] - a[p * n + p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
            }
        }
        if !rotated {
            let mut eig: Vec<T> = (0..n).map(|k| a[k * n + k]).collect();
            eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(eig);
        }
    }
    Err(Error::NoConvergence { iterations: JACOBI_MAX_SWEEPS })
}

/// Power iteration from the all-equal start vector; returns `|M v|` once it
/// changes by less than `tol` (relative, floored at 1).
pub fn power_iteration_norm<T: Real>(m: &SymMatrix<T>, tol: T, max_iter: usize) -> Result<T> {
    let n = m.dim();
    if n == 0 {
        return Ok(T::zero());
    }
    let mut v = vec![T::one() / T::from_usize(n).sqrt(); n];
    let mut prev = T::zero();
    for _ in 0..max_iter {
        let w = m.mul_vec(&v);
        let est = w.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
        if est == T::zero() {
            return Ok(T::zero());
        }
        if (est - prev).abs() <= tol * T::one().max(est) {
            return Ok(est);
        }
        prev = est;
        v = w.into_iter().map(|x| x / est).collect();
    }
    Err(Error::NoConvergence { iterations: max_iter })
}
