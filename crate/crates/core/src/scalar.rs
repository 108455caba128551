//! Scalar abstraction for the numeric kernels.
//!
//! Optimization code is generic over [`Real`], a float-like scalar bound
//! built on `num-traits`; `f32` and `f64` are the provided instantiations.
//! Exact (rational) evaluation of the edge polynomial does not need a float
//! and is bounded directly by the ring traits it uses.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::float::Float;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the simplex optimizer.
///
/// The bound collects what the kernels actually use: IEEE-style arithmetic
/// with `sqrt`/`abs`/infinities (`Float`), conversions from literal
/// constants (`FromPrimitive`/`ToPrimitive`), compound assignment, and
/// thread-safety so restarts can run in parallel.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` for tolerances and literals.
    fn from_config(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must convert into a Real scalar")
    }

    /// Conversion to `f64` for reporting.
    fn to_report(self) -> f64 {
        self.to_f64().expect("Real scalar must convert to f64 for reporting")
    }
}

impl Real for f32 {}
impl Real for f64 {}
