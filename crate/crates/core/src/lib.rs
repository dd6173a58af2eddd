//! Numerical laboratory for the confluence ε → 0 of the hypergeometric
//! equation x(x−ε) w″ + {1−ε+(a+b+1)x} w′ + ab w = 0.
//!
//! The crate evaluates and cross-verifies the computable objects attached to
//! this family: local solution bases at the two merging singular points,
//! connection coefficients, unfolded Stokes multipliers and their ε → 0
//! limits, monodromy matrices in the mixed bases, Borel sums of the divergent
//! confluent series, and the first integrals of the associated Riccati
//! system.
//!
//! All numerics are generic over the real scalar type (see [`scalar::Real`]);
//! concrete `f64` aliases are exported at the crate root.

pub mod borel;
pub mod branched;
pub mod error;
pub mod gamma;
pub mod hyp;
pub mod path;
pub mod riccati;
pub mod scalar;
pub mod sectors;
pub mod stokes;

pub use branched::BranchedPoint;
pub use error::{EvalError, Result};
pub use scalar::Real;
pub use sectors::{BasisTag, Params, Sector, SectorConfig, Solution};

/// Complex scalar over `f64`.
pub type C64 = num_complex::Complex<f64>;
/// Complex scalar over `f32`.
pub type C32 = num_complex::Complex<f32>;
/// Branch-tracked point over `f64`.
pub type BranchedPoint64 = BranchedPoint<f64>;
/// Family parameters over `f64`.
pub type Params64 = Params<f64>;
