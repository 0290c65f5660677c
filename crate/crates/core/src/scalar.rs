//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar the analysis is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for [`Scalar::lit`].
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}

/// Neumaier compensated sum of a sequence of terms.
pub fn compensated_sum<T: Scalar>(terms: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp = comp + ((sum - s) + t);
        } else {
            comp = comp + ((t - s) + sum);
        }
        sum = s;
    }
    sum + comp
}
