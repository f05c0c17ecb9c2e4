use thiserror::Error;

use crate::qcore::BasisLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which link of the per-query drop chain failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainLink {
    /// `W_j - W_{j+1}` against the projected sub-state expansion.
    ExactIdentity,
    /// `D <= S`.
    TriangleInequality,
    /// `S <= 2 |gamma| |M| |delta|`.
    MatrixBound,
    /// `2 |gamma| |M| |delta| <= pi N`.
    HilbertCap,
}

impl std::fmt::Display for ChainLink {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ChainLink::ExactIdentity => "drop == sub-state expansion",
            ChainLink::TriangleInequality => "D <= S",
            ChainLink::MatrixBound => "S <= 2|gamma||M||delta|",
            ChainLink::HilbertCap => "2|gamma||M||delta| <= pi N",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: length must be a power of two and lo aligned to it")]
    InvalidInterval { lo: usize, hi: usize },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator declared unitary changed the squared norm from {before} to {after}")]
    NormDrift { before: f64, after: f64 },

    #[error("invalid instance: answer {answer} out of range for list length {n}")]
    InvalidInstance { n: usize, answer: usize },

    #[error("unexpected basis label {label} for {context}")]
    WrongLabel { label: BasisLabel, context: &'static str },

    #[error("label {label} has no query index")]
    UndefinedQueryIndex { label: BasisLabel },

    #[error("V^({s}) maps {from} onto {onto}, which is already occupied")]
    Collision { s: usize, from: BasisLabel, onto: BasisLabel },

    #[error("{what} must be a power of two, got {value}")]
    NotPowerOfTwo { what: &'static str, value: usize },

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("expected {expected} per-answer states, got {got}")]
    StateCount { expected: usize, got: usize },

    #[error("matrix is not square and symmetric")]
    NotSymmetric,

    #[error("spectral norm did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("drop chain violated at `{link}`: {lhs} > {rhs}")]
    ChainViolation { link: ChainLink, lhs: f64, rhs: f64 },

    #[error("weight function is not the ordered-search weight")]
    UnsupportedWeight,

    #[error("{n} is not representable with digits in 0..=3")]
    NotRepresentable { n: u64 },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("malformed state dump line {line}: {reason}")]
    Parse { line: usize, reason: String },
}
