//! The confluence data model: sectors S± in the ε-plane, the normalizing
//! constants κ±, the four local solutions w1–w4 of
//! x(x−ε) w″ + {1−ε+(a+b+1)x} w′ + ab w = 0, their connection coefficients,
//! the mixed-basis quotients H^{ε±}, and the sector-swapping symmetry
//! (a, b, ε, x) ↦ (a, b, ε′, x′).

use num_complex::Complex;

use crate::branched::BranchedPoint;
use crate::error::{EvalError, Result};
use crate::gamma::{gamma_ratio, near_nonpositive_integer};
use crate::hyp::{f21, f21_derivative};
use crate::scalar::Real;

/// Distance-to-integer tolerance for the validity flags of w1–w4.
const VALIDITY_TOL: f64 = 1e-9;
/// Real part of a log-space exponent beyond which exp would overflow f64.
const EXP_OVERFLOW: f64 = 700.0;

/// Parameters of the confluent family. `eps` carries a lifted argument so
/// that continuations in ε (e.g. the square-root unfolding) stay explicit.
#[derive(Debug, Clone, Copy)]
pub struct Params<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub eps: BranchedPoint<T>,
}

/// The four local solutions: w1, w2 at x = 0 and w3, w4 at x = ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solution {
    W1,
    W2,
    W3,
    W4,
}

/// Sector tag in the ε-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    SPlus,
    SMinus,
}

/// Ordered bases: B⁺ = (κ⁺w2, w3) on S⁺, B⁻ = (κ⁻w4, w1) on S⁻.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    BPlus,
    BMinus,
}

/// Result of classifying ε against the two sectors (they overlap).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorSet {
    pub plus: bool,
    pub minus: bool,
}

impl SectorSet {
    pub fn contains(&self, s: Sector) -> bool {
        match s {
            Sector::SPlus => self.plus,
            Sector::SMinus => self.minus,
        }
    }
}

/// Sector geometry: opening defect γ and disk radius r(γ).
#[derive(Debug, Clone, Copy)]
pub struct SectorConfig<T> {
    pub gamma_opening: T,
    pub radius: T,
}

impl<T: Real> SectorConfig<T> {
    /// Default radius r = min(0.1, γ/(4π)), which keeps 1/ε well away from
    /// the excluded integer lattices on each sector.
    pub fn new(gamma_opening: T) -> Result<Self> {
        if !(gamma_opening > T::zero() && gamma_opening < T::of(0.5) * T::PI()) {
            return Err(EvalError::ConfigInvalid(
                "gamma_opening must lie in (0, pi/2)".into(),
            ));
        }
        let radius = T::of(0.1).min(gamma_opening / (T::of(4.0) * T::PI()));
        Ok(Self {
            gamma_opening,
            radius,
        })
    }

    pub fn with_radius(gamma_opening: T, radius: T) -> Result<Self> {
        if !(gamma_opening > T::zero() && gamma_opening < T::of(0.5) * T::PI()) {
            return Err(EvalError::ConfigInvalid(
                "gamma_opening must lie in (0, pi/2)".into(),
            ));
        }
        if !(radius > T::zero()) {
            return Err(EvalError::ConfigInvalid("radius must be positive".into()));
        }
        Ok(Self {
            gamma_opening,
            radius,
        })
    }
}

/// Membership of ε in S⁺ = {0<|ε|<r, arg ε ∈ (−π+γ, π−γ)} and
/// S⁻ = {0<|ε|<r, arg ε ∈ (γ, 2π−γ)}. The lifted argument is reduced to the
/// fundamental window of each sector.
pub fn sector_classify<T: Real>(eps: &BranchedPoint<T>, cfg: &SectorConfig<T>) -> Result<SectorSet> {
    if eps.modulus() >= cfg.radius {
        return Err(EvalError::OutOfDisk);
    }
    let g = cfg.gamma_opening;
    let pa = eps.principal_argument(); // in (−π, π]
    let plus = pa > -T::PI() + g && pa < T::PI() - g;
    let wrapped = if pa < T::zero() { pa + T::PI() + T::PI() } else { pa }; // in [0, 2π)
    let minus = wrapped > g && wrapped < T::PI() + T::PI() - g;
    Ok(SectorSet { plus, minus })
}

impl<T: Real> Params<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, eps: BranchedPoint<T>) -> Self {
        Self { a, b, eps }
    }

    /// 1/ε as a plain complex value.
    pub fn inv_eps(&self) -> Complex<T> {
        self.eps.value().inv()
    }

    /// The ₂F₁ lower parameter of `which`.
    pub fn lower_parameter(&self, which: Solution) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let two = Complex::new(T::of(2.0), T::zero());
        let ie = self.inv_eps();
        match which {
            Solution::W1 => one - ie,
            Solution::W2 => one + ie,
            Solution::W3 => self.a + self.b + ie,
            Solution::W4 => two - ie - self.a - self.b,
        }
    }

    /// Existence flag of `which`: the lower ₂F₁ parameter must stay at least
    /// 1e-9 away from −ℕ ∪ {0}.
    pub fn validity(&self, which: Solution) -> Result<()> {
        let c = self.lower_parameter(which);
        if near_nonpositive_integer(c, T::of(VALIDITY_TOL)) {
            return Err(EvalError::BasisInvalid(format!(
                "lower parameter {c} of {which:?} is within 1e-9 of a non-positive integer"
            )));
        }
        Ok(())
    }

    /// Exponent β = 1 − 1/ε − a − b of the second prefactor of w2 and w4.
    pub fn beta(&self) -> Complex<T> {
        Complex::new(T::one(), T::zero()) - self.inv_eps() - self.a - self.b
    }
}

/// Normalizing constants κ±(ε) = ε^{1−a−b} e^{±πi(a+b−1+1/ε)}.
/// ε^{1−a−b} uses the lifted argument of ε.
pub fn kappa<T: Real>(p: &Params<T>, sector: Sector) -> Complex<T> {
    ln_kappa(p, sector).exp()
}

/// log κ±(ε), for assembling quotients in log space.
pub fn ln_kappa<T: Real>(p: &Params<T>, sector: Sector) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let exponent = one - p.a - p.b;
    let phase = p.a + p.b - one + p.inv_eps();
    let ipi = Complex::new(T::zero(), T::PI());
    let sgn = match sector {
        Sector::SPlus => T::one(),
        Sector::SMinus => -T::one(),
    };
    exponent * p.eps.ln() + ipi.scale(sgn) * phase
}

/// A basis value with its error estimate. `reciprocal` marks values returned
/// as 1/value (Riemann-sphere convention for quotients near a pole).
#[derive(Debug, Clone, Copy)]
pub struct EvalResult<T> {
    pub value: Complex<T>,
    pub truncation_bound: T,
    pub reciprocal: bool,
}

/// The branched pair (u, v) = (x/ε, 1−x/ε) defining the evaluation point of
/// the bases. The continuation convention starts on the open segment (0, ε)
/// with both arguments 0; any winding around 0 (argument of u) or around ε
/// (argument of v) must be supplied explicitly.
#[derive(Debug, Clone, Copy)]
pub struct LensPoint<T> {
    pub u: BranchedPoint<T>,
    pub v: BranchedPoint<T>,
}

impl<T: Real> LensPoint<T> {
    /// Principal lift from x: u = x/ε with the windings of x and ε,
    /// v = 1 − u with principal argument.
    pub fn from_x(p: &Params<T>, x: &BranchedPoint<T>) -> Self {
        let u = x.div(&p.eps);
        let one = Complex::new(T::one(), T::zero());
        let v = BranchedPoint::from_value(one - u.value());
        Self { u, v }
    }
}

/// log of the shared prefactor (x/ε)^{1/ε} (1−x/ε)^{1−1/ε−a−b} of w2 and w4.
pub fn ln_prefactor<T: Real>(p: &Params<T>, at: &LensPoint<T>) -> Complex<T> {
    p.inv_eps() * at.u.ln() + p.beta() * at.v.ln()
}

fn check_exponent<T: Real>(e: Complex<T>) -> Result<()> {
    if !(e.re.is_finite() && e.im.is_finite()) || e.re.abs() > T::of(EXP_OVERFLOW) {
        return Err(EvalError::ContinuationFailure(format!(
            "prefactor exponent {e} out of the floating-point range"
        )));
    }
    Ok(())
}

/// The hypergeometric factor of `which` (the solution without its branched
/// prefactor), as (value, truncation bound).
fn series_factor<T: Real>(
    p: &Params<T>,
    which: Solution,
    at: &LensPoint<T>,
) -> Result<(Complex<T>, T)> {
    let one = Complex::new(T::one(), T::zero());
    let c = p.lower_parameter(which);
    let s = match which {
        Solution::W1 => f21(p.a, p.b, c, &at.u)?,
        Solution::W2 => f21(one - p.a, one - p.b, c, &at.u)?,
        Solution::W3 => f21(p.a, p.b, c, &at.v)?,
        Solution::W4 => f21(one - p.a, one - p.b, c, &at.v)?,
    };
    Ok((s.value, s.truncation_bound))
}

/// Evaluate w1–w4 at the lifted point `at`:
///   w1 = ₂F₁(a, b, 1−1/ε; u)
///   w2 = u^{1/ε} v^{1−1/ε−a−b} ₂F₁(1−a, 1−b, 1+1/ε; u)
///   w3 = ₂F₁(a, b, a+b+1/ε; v)
///   w4 = u^{1/ε} v^{1−1/ε−a−b} ₂F₁(1−a, 1−b, 2−1/ε−a−b; v)
pub fn basis_eval_lifted<T: Real>(
    p: &Params<T>,
    which: Solution,
    at: &LensPoint<T>,
) -> Result<EvalResult<T>> {
    p.validity(which)?;
    let (f, bound) = series_factor(p, which, at)?;
    let (value, bound) = match which {
        Solution::W1 | Solution::W3 => (f, bound),
        Solution::W2 | Solution::W4 => {
            let e = ln_prefactor(p, at);
            check_exponent(e)?;
            let pre = e.exp();
            (pre * f, bound * pre.norm())
        }
    };
    Ok(EvalResult {
        value,
        truncation_bound: bound,
        reciprocal: false,
    })
}

/// `basis_eval_lifted` at the principal lift of x.
pub fn basis_eval<T: Real>(
    p: &Params<T>,
    which: Solution,
    x: &BranchedPoint<T>,
) -> Result<EvalResult<T>> {
    basis_eval_lifted(p, which, &LensPoint::from_x(p, x))
}

/// Value and x-derivative of `which` at the lifted point, via the contiguity
/// derivative of ₂F₁ and the product rule on the branched prefactor
/// (du/dx = 1/ε, dv/dx = −1/ε).
pub fn basis_value_and_deriv<T: Real>(
    p: &Params<T>,
    which: Solution,
    at: &LensPoint<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    p.validity(which)?;
    let one = Complex::new(T::one(), T::zero());
    let ie = p.inv_eps();
    let c = p.lower_parameter(which);
    match which {
        Solution::W1 => {
            let f = f21(p.a, p.b, c, &at.u)?.value;
            let df = f21_derivative(p.a, p.b, c, &at.u)?.value;
            Ok((f, ie * df))
        }
        Solution::W3 => {
            let f = f21(p.a, p.b, c, &at.v)?.value;
            let df = f21_derivative(p.a, p.b, c, &at.v)?.value;
            Ok((f, -ie * df))
        }
        Solution::W2 | Solution::W4 => {
            let e = ln_prefactor(p, at);
            check_exponent(e)?;
            let pre = e.exp();
            let (aa, bb) = (one - p.a, one - p.b);
            let (f, df, sgn) = match which {
                Solution::W2 => (
                    f21(aa, bb, c, &at.u)?.value,
                    f21_derivative(aa, bb, c, &at.u)?.value,
                    one,
                ),
                _ => (
                    f21(aa, bb, c, &at.v)?.value,
                    f21_derivative(aa, bb, c, &at.v)?.value,
                    -one,
                ),
            };
            // d(ln pre)/dx = (1/ε)( (1/ε)/u − β/v )
            let dlnpre = ie * (ie / at.u.value() - p.beta() / at.v.value());
            Ok((pre * f, pre * (dlnpre * f + ie * sgn * df)))
        }
    }
}

/// Which prolongation relation to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prolongation {
    /// w2 = D·w3 + E·w4.
    W2InBeps,
    /// w3 = A·w1 + B·w2.
    W3InB0,
}

fn coeff<T: Real>(num: [Complex<T>; 2], den: [Complex<T>; 2]) -> Result<Complex<T>> {
    let tol = T::of(VALIDITY_TOL);
    for z in num {
        if near_nonpositive_integer(z, tol) {
            return Err(EvalError::CoefficientPole(format!(
                "Gamma argument {z} at a pole"
            )));
        }
    }
    // A pole in a denominator Gamma kills the whole coefficient.
    if den.iter().any(|&z| near_nonpositive_integer(z, tol)) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    Ok(gamma_ratio(&num, &den))
}

/// Connection coefficients of the prolongation relations:
///   (D, E) with D = Γ(1−1/ε−a−b)Γ(1+1/ε)/(Γ(1−a)Γ(1−b)),
///            E = Γ(a+b−1+1/ε)Γ(1+1/ε)/(Γ(a+1/ε)Γ(b+1/ε));
///   (A, B) with A = Γ(1/ε)Γ(a+b+1/ε)/(Γ(b+1/ε)Γ(a+1/ε)),
///            B = Γ(a+b+1/ε)Γ(−1/ε)/(Γ(a)Γ(b)).
pub fn connection_coeffs<T: Real>(
    p: &Params<T>,
    which: Prolongation,
) -> Result<(Complex<T>, Complex<T>)> {
    let one = Complex::new(T::one(), T::zero());
    let ie = p.inv_eps();
    let ab = p.a + p.b;
    match which {
        Prolongation::W2InBeps => {
            // Requires 2 − 1/ε − a − b ∉ −ℕ.
            p.validity(Solution::W4).map_err(|_| {
                EvalError::CoefficientPole(
                    "2 - 1/eps - a - b in -N: use the pole-free multiplier formulas".into(),
                )
            })?;
            let d = coeff([one - ie - ab, one + ie], [one - p.a, one - p.b])?;
            let e = coeff([ab - one + ie, one + ie], [p.a + ie, p.b + ie])?;
            Ok((d, e))
        }
        Prolongation::W3InB0 => {
            // Requires 1 − 1/ε ∉ −ℕ.
            p.validity(Solution::W1).map_err(|_| {
                EvalError::CoefficientPole(
                    "1 - 1/eps in -N: use the pole-free multiplier formulas".into(),
                )
            })?;
            let a = coeff([ie, ab + ie], [p.b + ie, p.a + ie])?;
            let b = coeff([ab + ie, -ie], [p.a, p.b])?;
            Ok((a, b))
        }
    }
}

/// The mixed-basis quotient H^{ε+} = κ⁺w2/w3 (ε ∈ S⁺) or H^{ε−} = κ⁻w4/w1
/// (ε ∈ S⁻), assembled in log space so that the κ± and prefactor exponents
/// cancel before exponentiation. Near a pole of the quotient the reciprocal
/// is returned with the `reciprocal` flag set.
pub fn h_eps_lifted<T: Real>(
    p: &Params<T>,
    sector: Sector,
    at: &LensPoint<T>,
) -> Result<EvalResult<T>> {
    let tiny = T::of(1e-300);
    let (num_sol, den_sol) = match sector {
        Sector::SPlus => (Solution::W2, Solution::W3),
        Sector::SMinus => (Solution::W4, Solution::W1),
    };
    p.validity(num_sol)?;
    p.validity(den_sol)?;
    let (fnum, bnum) = series_factor(p, num_sol, at)?;
    let (fden, bden) = series_factor(p, den_sol, at)?;
    if fnum.norm() < tiny && fden.norm() < tiny {
        return Err(EvalError::IndeterminateZeroOverZero);
    }
    let e = ln_kappa(p, sector) + ln_prefactor(p, at);
    if !(e.re.is_finite() && e.im.is_finite()) {
        return Err(EvalError::ContinuationFailure(
            "non-finite quotient exponent".into(),
        ));
    }
    // Relative error of the quotient from the two series bounds.
    let rel = bnum / fnum.norm().max(tiny) + bden / fden.norm().max(tiny);
    let ln_h = e + fnum.ln() - fden.ln();
    let flip = fden.norm() < tiny || ln_h.re > T::of(EXP_OVERFLOW);
    let value = if flip { (-ln_h).exp() } else { ln_h.exp() };
    Ok(EvalResult {
        value,
        truncation_bound: rel * value.norm(),
        reciprocal: flip,
    })
}

/// `h_eps_lifted` at the principal lift of x.
pub fn h_eps<T: Real>(
    p: &Params<T>,
    sector: Sector,
    x: &BranchedPoint<T>,
) -> Result<EvalResult<T>> {
    h_eps_lifted(p, sector, &LensPoint::from_x(p, x))
}

/// The sector-swapping symmetry (a, b, ε, x) ↦ (a, b, ε′, x′) with
/// ε′ = 1/(1−1/ε−a−b) and x′ = ε′(1−x/ε). It is an involution, maps S⁺ into
/// S⁻, exchanges the bases B⁺ ↔ B⁻, and satisfies w3(x, ε) = w1(x′, ε′).
pub fn lemma_symmetry<T: Real>(
    p: &Params<T>,
    x: &BranchedPoint<T>,
) -> Result<(Params<T>, BranchedPoint<T>)> {
    let denom = p.beta();
    if denom.norm() < T::of(1e-14) {
        return Err(EvalError::SingularTransform);
    }
    let eps_p = BranchedPoint::from_value(denom.inv());
    let at = LensPoint::from_x(p, x);
    // x′ = ε′ · v keeps the winding of v = 1 − x/ε.
    let xp = BranchedPoint::new(
        eps_p.modulus() * at.v.modulus(),
        eps_p.argument() + at.v.argument(),
    );
    Ok((Params::new(p.a, p.b, eps_p), xp))
}
