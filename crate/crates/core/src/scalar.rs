//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All state, transform and Fisher-information code is written against
//! [`Real`], so the same formulas run in `f32`, `f64` or double-double
//! ([`DoubleDouble`](crate::dd::DoubleDouble)) precision.

use crate::dd::DoubleDouble;
use crate::linalg::Entry;
use num_traits::{Float, FloatConst, NumAssign};
use std::fmt::{Debug, Display};

/// Real scalar usable throughout the crate.
pub trait Real:
    Float + FloatConst + NumAssign + Debug + Display + Send + Sync + 'static + Entry<Scalar = Self>
{
    /// Wider type used where a computation loses many digits to cancellation.
    type Work: Real;

    fn widen(self) -> Self::Work;
    fn narrow(w: Self::Work) -> Self;

    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal fits every supported scalar")
    }

    /// Nearest `f64`, used for reporting and output files.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    type Work = f64;
    fn widen(self) -> f64 {
        self as f64
    }
    fn narrow(w: f64) -> Self {
        w as f32
    }
}

impl Real for f64 {
    type Work = DoubleDouble;
    fn widen(self) -> DoubleDouble {
        DoubleDouble::c(self)
    }
    fn narrow(w: DoubleDouble) -> Self {
        w.hi() + w.lo()
    }
}

impl Real for DoubleDouble {
    type Work = DoubleDouble;
    fn widen(self) -> Self {
        self
    }
    fn narrow(w: Self) -> Self {
        w
    }
}

/// Relative difference `|a - b| / max(|b|, floor)`.
pub fn rel_diff<T: Real>(a: T, b: T, floor: T) -> T {
    (a - b).abs() / b.abs().max(floor)
}
