//! Simulation and analysis of quantum ordered search.
//!
//! * [`qcore`]: sparse complex state vectors over basis labels.
//! * [`oracle`]: sorted-list instances and the diagonal query operator.
//! * [`lowerbound`]: weighted all-pairs inner products, the per-query drop
//!   chain, Hilbert/Hankel norms and the resulting query lower bounds.
//! * [`teamsearch`]: the one-query team combine, knowledge layouts, the
//!   expansion-factor accounting and an embedded classical binary search.
//!
//! Everything numeric is generic over [`Real`]; the aliases below fix the
//! scalar to `f64`, which is what all tolerances are tuned for.

pub mod error;
pub mod format;
pub mod lowerbound;
pub mod oracle;
pub mod qcore;
pub mod scalar;
pub mod teamsearch;

pub use error::{ChainLink, Error, Result};
pub use scalar::Real;

pub type State = qcore::SparseState<f64>;
pub type Amplitude = num_complex::Complex<f64>;
pub type Weights = lowerbound::WeightSpec<f64>;
pub type Trajectory = lowerbound::TrajectoryRecord<f64>;
pub type Profile = lowerbound::MassProfile<f64>;
pub type Chain = lowerbound::ChainReport<f64>;
pub type Matrix = lowerbound::SymMatrix<f64>;
