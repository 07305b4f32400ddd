//! Scalar abstraction: the whole library is generic over `Real`, implemented
//! for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the library.
pub trait Real:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Shorthand conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable in this scalar type")
    }

    /// Lossless widening to `f64` for traces and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// An invariant-checking tolerance: the stated gate, widened to a few
    /// hundred ulps when the scalar type is too coarse to honor it (the f64
    /// gates pass through unchanged; f32 scales with its epsilon).
    fn invariant_tol(gate: f64) -> Self {
        Self::of(gate).max(Self::epsilon() * Self::of(256.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
