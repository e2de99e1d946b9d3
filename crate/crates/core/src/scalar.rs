//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// All algorithms are written against this trait. The accuracy figures quoted
/// in the documentation and asserted by the test-suites refer to `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Converts a count or index into the scalar type.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }

    /// Lossy conversion back to `f64`, used for reporting only.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

/// Lifts a real value into the complex plane.
#[inline]
pub fn cx<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Complex square root on the principal branch.
#[inline]
pub fn csqrt<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.im == T::zero() && z.re >= T::zero() {
        cx(z.re.sqrt())
    } else {
        z.sqrt()
    }
}
