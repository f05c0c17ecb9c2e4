//! Floating-point scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, NumAssignOps};

/// Real scalar used for amplitudes, weights and matrix entries.
///
/// The associated tolerances scale with the precision of the type: `f64`
/// uses the thresholds the simulator is specified against, `f32` gets
/// looser ones so that the same code paths stay usable.
pub trait Real:
    Float + FloatConst + NumAssignOps + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Amplitudes with magnitude below this are dropped from sparse states.
    const PRUNE: f64;
    /// Allowed deviation of a normalized state's squared norm from 1.
    const NORM_TOL: f64;
    /// Slack allowed when comparing the links of a per-query drop chain.
    const CHAIN_TOL: f64;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal fits any Real")
    }

    /// Converts an integer count into this scalar type.
    #[inline]
    fn from_usize(n: usize) -> Self {
        Self::lit(n as f64)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const PRUNE: f64 = 1e-15;
    const NORM_TOL: f64 = 1e-9;
    const CHAIN_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const PRUNE: f64 = 1e-7;
    const NORM_TOL: f64 = 1e-4;
    const CHAIN_TOL: f64 = 1e-3;
}
