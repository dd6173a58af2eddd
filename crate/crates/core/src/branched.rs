//! Points of the punctured plane with an explicit log-lift.
//!
//! A [`BranchedPoint`] is a nonzero complex number together with a chosen
//! continuous argument. The argument is never reduced to a principal range:
//! winding history is part of the data, and every multivalued power becomes a
//! univalued function of the lifted point.

use num_complex::Complex;

use crate::scalar::Real;

/// A nonzero complex point `modulus * exp(i * argument)` with unwrapped argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedPoint<T> {
    modulus: T,
    argument: T,
}

impl<T: Real> BranchedPoint<T> {
    /// Build from polar data. Panics if `modulus <= 0` or not finite.
    pub fn new(modulus: T, argument: T) -> Self {
        assert!(
            modulus > T::zero() && modulus.is_finite() && argument.is_finite(),
            "BranchedPoint requires a finite positive modulus"
        );
        Self { modulus, argument }
    }

    /// Lift of a nonzero complex value with principal argument in (-π, π].
    pub fn from_value(z: Complex<T>) -> Self {
        Self::new(z.norm(), z.arg())
    }

    /// Real positive point with argument 0.
    pub fn positive(modulus: T) -> Self {
        Self::new(modulus, T::zero())
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    pub fn argument(&self) -> T {
        self.argument
    }

    /// The underlying complex value.
    pub fn value(&self) -> Complex<T> {
        Complex::from_polar(self.modulus, self.argument)
    }

    /// The chosen branch of the logarithm.
    pub fn ln(&self) -> Complex<T> {
        Complex::new(self.modulus.ln(), self.argument)
    }

    /// Same point, argument shifted by `delta` (explicit winding).
    pub fn rotated(&self, delta: T) -> Self {
        Self::new(self.modulus, self.argument + delta)
    }

    /// Same ray, rescaled modulus.
    pub fn with_modulus(&self, modulus: T) -> Self {
        Self::new(modulus, self.argument)
    }

    /// `self^alpha = exp(alpha * (ln modulus + i argument))`, univalued in the lift.
    pub fn pow(&self, alpha: Complex<T>) -> Complex<T> {
        (alpha * self.ln()).exp()
    }

    /// Quotient of lifted points: moduli divide, arguments subtract.
    pub fn div(&self, other: &Self) -> Self {
        Self::new(self.modulus / other.modulus, self.argument - other.argument)
    }

    /// The argument reduced to (-π, π].
    pub fn principal_argument(&self) -> T {
        let two_pi = T::PI() + T::PI();
        let mut a = self.argument % two_pi;
        if a > T::PI() {
            a = a - two_pi;
        } else if a <= -T::PI() {
            a = a + two_pi;
        }
        a
    }

    /// Winding number relative to the principal branch.
    pub fn winding(&self) -> i64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let d = (self.argument - self.principal_argument())
            .to_f64()
            .unwrap_or(0.0);
        (d / two_pi).round() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    type B = BranchedPoint<f64>;

    #[test]
    fn value_round_trip() {
        let p = B::new(2.0, 0.7);
        let q = B::from_value(p.value());
        assert!((q.modulus() - 2.0).abs() < 1e-14);
        assert!((q.argument() - 0.7).abs() < 1e-14);
    }

    #[test]
    fn pow_unit_argument_zero() {
        let p = B::positive(1.0);
        let v = p.pow(cplx(0.3, -1.2));
        assert!((v - cplx::<f64>(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pow_full_turn_half_power() {
        // modulus 1, argument 2π, exponent 1/2 -> e^{iπ} = -1
        let p = B::new(1.0, 2.0 * std::f64::consts::PI);
        let v = p.pow(cplx(0.5, 0.0));
        assert!((v - cplx::<f64>(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pow_imaginary_exponent() {
        // (e)^i = cos 1 + i sin 1
        let p = B::positive(std::f64::consts::E);
        let v = p.pow(cplx(0.0, 1.0));
        assert!((v - cplx::<f64>(1.0f64.cos(), 1.0f64.sin())).norm() < 1e-14);
    }

    #[test]
    fn winding_bookkeeping() {
        let p = B::new(1.5, 0.3 + 4.0 * std::f64::consts::PI);
        assert_eq!(p.winding(), 2);
        assert!((p.principal_argument() - 0.3).abs() < 1e-12);
        assert!((p.value() - B::new(1.5, 0.3).value()).norm() < 1e-12);
    }
}
