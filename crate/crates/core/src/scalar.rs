//! Scalar abstraction: the library is generic over the underlying real
//! floating-point type through [`Real`]. Concrete aliases for `f64` live at
//! the crate root.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar underlying all complex arithmetic here.
///
/// `f32` compiles and runs but does not reach the documented tolerances;
/// use `f64` for anything quantitative.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 -> scalar conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number from two `f64` literals.
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

/// The imaginary unit.
pub fn i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `z` as a real complex number.
pub fn re<T: Real>(v: f64) -> Complex<T> {
    Complex::new(T::of(v), T::zero())
}

/// π as a scalar.
pub fn pi<T: Real>() -> T {
    T::PI()
}

/// 2π as a scalar.
pub fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}
