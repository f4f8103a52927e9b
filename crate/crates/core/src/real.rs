//! Scalar abstraction for the floating-point numerics.
//!
//! Everything that needs transcendental functions is written against
//! [`Real`], which is blanket-implemented for any `num_traits::Float` with
//! the usual constants, so both `f32` and `f64` work.  Series coefficients
//! that must also admit exact rationals use
//! [`Coefficient`](crate::weak_field::Coefficient) instead.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}
