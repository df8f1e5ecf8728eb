//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the solver is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every supported type represents it up to rounding.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Ratio of this type's machine epsilon to `f64::EPSILON`; scales f64-calibrated tolerances.
    #[inline]
    fn eps_ratio() -> Self {
        Self::epsilon() / Self::lit(f64::EPSILON)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Cplx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `(re, im)` pair in `f64`, used in error payloads and reports.
#[inline]
pub(crate) fn pair<T: Real>(z: Cplx<T>) -> (f64, f64) {
    (z.re.as_f64(), z.im.as_f64())
}

#[inline]
pub(crate) fn iu<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::one())
}
