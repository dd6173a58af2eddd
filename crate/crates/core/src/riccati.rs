//! Structure of the Riccati system
//!   ẋ = x(x−ε),  ẏ = ab·x(x−ε) + (−1+(1−a−b)x)·y + y²,
//! obtained from the linear family by y = −x(x−ε)·w′/w: singular points and
//! their eigenvalue quotients, invariant manifolds y = ρᵢ(x,ε), sphere-valued
//! first integrals I^{ε±}, and the universal unfolding ẋ = x²−ε with the
//! analytic product invariant L(ε).

use num_complex::Complex;

use crate::branched::BranchedPoint;
use crate::error::{EvalError, Result};
use crate::hyp::f21;
use crate::scalar::Real;
use crate::sectors::{
    basis_value_and_deriv, connection_coeffs, kappa, EvalResult, LensPoint, Params, Prolongation,
    Sector, Solution,
};
use crate::stokes::Around;

/// One singular point of the Riccati system with the ratio of the Jacobian
/// eigenvalue in y to the eigenvalue in x.
#[derive(Debug, Clone, Copy)]
pub struct SingularPointInfo<T> {
    pub location: (Complex<T>, Complex<T>),
    pub eigen_quotient: Complex<T>,
}

/// The vector field (ẋ, ẏ) of the Riccati system.
pub fn riccati_field<T: Real>(
    p: &Params<T>,
    state: (Complex<T>, Complex<T>),
) -> (Complex<T>, Complex<T>) {
    crate::path::riccati_rhs(p, state.0, state.1)
}

/// The four singular points (0,0), (ε,0), (0,1), (ε,y₁) with
/// y₁ = 1 + ε(a+b−1), and their eigenvalue quotients
/// 1/ε, 1−1/ε−a−b, −1/ε, −1+1/ε+a+b in that order. The Jacobian is lower
/// triangular (ẋ does not depend on y), so the quotients are
/// (∂ẏ/∂y)/(∂ẋ/∂x) evaluated at each point.
pub fn singular_points<T: Real>(p: &Params<T>) -> [SingularPointInfo<T>; 4] {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let eps = p.eps.value();
    let ie = p.inv_eps();
    let ab = p.a + p.b;
    let y1 = one + eps * (ab - one);
    [
        SingularPointInfo {
            location: (zero, zero),
            eigen_quotient: ie,
        },
        SingularPointInfo {
            location: (eps, zero),
            eigen_quotient: one - ie - ab,
        },
        SingularPointInfo {
            location: (zero, one),
            eigen_quotient: -ie,
        },
        SingularPointInfo {
            location: (eps, y1),
            eigen_quotient: -one + ie + ab,
        },
    ]
}

/// Convert a numerator/denominator pair into a sphere-valued result: near a
/// pole the reciprocal is returned with the flag set.
fn sphere<T: Real>(num: Complex<T>, den: Complex<T>, bound: T) -> Result<EvalResult<T>> {
    let tiny = T::of(1e-300);
    if den.norm() <= tiny && num.norm() <= tiny {
        return Err(EvalError::IndeterminateZeroOverZero);
    }
    if den.norm() < tiny.max(num.norm() * T::of(1e-200)) {
        Ok(EvalResult {
            value: den / num,
            truncation_bound: bound,
            reciprocal: true,
        })
    } else {
        Ok(EvalResult {
            value: num / den,
            truncation_bound: bound,
            reciprocal: false,
        })
    }
}

/// ρᵢ as a fraction (numerator, denominator, series bound).
fn rho_fraction<T: Real>(
    p: &Params<T>,
    which: Solution,
    at: &LensPoint<T>,
) -> Result<(Complex<T>, Complex<T>, T)> {
    p.validity(which)?;
    let one = Complex::new(T::one(), T::zero());
    let eps = p.eps.value();
    let ie = p.inv_eps();
    let u = at.u.value();
    let v = at.v.value();
    let x = eps * u;
    // q = x(x−ε) = −ε²·u·v
    let q = -eps * eps * u * v;
    match which {
        Solution::W2 => {
            // ρ₂ = (1−u) + {1+ε(a+b−1)}u
            //      + x(1−u)·((1−a)(1−b)/(1+1/ε))·F(2−a,2−b,2+1/ε;u)/F(1−a,1−b,1+1/ε;u)
            let c = one + ie;
            let f1 = f21(one - p.a, one - p.b, c, &at.u)?;
            let f2 = f21(one - p.a + one, one - p.b + one, c + one, &at.u)?;
            let cc = (one - p.a) * (one - p.b) / c;
            let poly = v + (one + eps * (p.a + p.b - one)) * u;
            let num = poly * f1.value + x * v * cc * f2.value;
            Ok((num, f1.value, f1.truncation_bound + f2.truncation_bound))
        }
        Solution::W3 => {
            // ρ₃ = (x(x−ε)/ε)·(ab/(a+b+1/ε))·F(1+a,1+b,1+a+b+1/ε;v)/F(a,b,a+b+1/ε;v)
            let c = p.a + p.b + ie;
            let f1 = f21(p.a, p.b, c, &at.v)?;
            let f2 = f21(p.a + one, p.b + one, c + one, &at.v)?;
            let num = q * ie * (p.a * p.b / c) * f2.value;
            Ok((num, f1.value, f1.truncation_bound + f2.truncation_bound))
        }
        Solution::W1 | Solution::W4 => {
            // ρᵢ = −x(x−ε) wᵢ′/wᵢ with the derivative from the contiguity
            // relation.
            let (w, dw) = basis_value_and_deriv(p, which, at)?;
            Ok((-q * dw, w, T::zero()))
        }
    }
}

/// The invariant-manifold value ρᵢ(x, ε) = −x(x−ε) wᵢ′(x)/wᵢ(x),
/// sphere-valued (a movable zero of wᵢ is a pole of ρᵢ).
pub fn rho_lifted<T: Real>(
    p: &Params<T>,
    which: Solution,
    at: &LensPoint<T>,
) -> Result<EvalResult<T>> {
    let (num, den, bound) = rho_fraction(p, which, at)?;
    sphere(num, den, bound)
}

/// `rho_lifted` from a plain branched x.
pub fn rho_eval<T: Real>(
    p: &Params<T>,
    which: Solution,
    x: &BranchedPoint<T>,
) -> Result<EvalResult<T>> {
    rho_lifted(p, which, &LensPoint::from_x(p, x))
}

/// Basis pair (i, j) of the first integral: (2,3) on S⁺, (4,1) on S⁻.
fn integral_pair(sector: Sector) -> (Solution, Solution) {
    match sector {
        Sector::SPlus => (Solution::W2, Solution::W3),
        Sector::SMinus => (Solution::W4, Solution::W1),
    }
}

/// I from the germs: κ (wᵢ/wⱼ)((y−ρᵢ)/(y−ρⱼ)) collapses to the linear form
/// κ·(y wᵢ + q wᵢ′)/(y wⱼ + q wⱼ′) with q = x(x−ε).
fn integral_from_germs<T: Real>(
    p: &Params<T>,
    sector: Sector,
    q: Complex<T>,
    y: Complex<T>,
    gi: (Complex<T>, Complex<T>),
    gj: (Complex<T>, Complex<T>),
) -> Result<EvalResult<T>> {
    let k = kappa(p, sector);
    let num = k * (y * gi.0 + q * gi.1);
    let den = y * gj.0 + q * gj.1;
    sphere(num, den, T::zero())
}

/// The first integral I^{ε±}(x, y) = κ^± (wᵢ/wⱼ)((y−ρᵢ)/(y−ρⱼ)),
/// sphere-valued on CP¹ (`reciprocal` marks the 1/I chart near y = ρⱼ).
pub fn first_integral_lifted<T: Real>(
    p: &Params<T>,
    sector: Sector,
    at: &LensPoint<T>,
    y: Complex<T>,
) -> Result<EvalResult<T>> {
    let (si, sj) = integral_pair(sector);
    let gi = basis_value_and_deriv(p, si, at)?;
    let gj = basis_value_and_deriv(p, sj, at)?;
    let eps = p.eps.value();
    let q = -eps * eps * at.u.value() * at.v.value();
    integral_from_germs(p, sector, q, y, gi, gj)
}

/// `first_integral_lifted` from a plain branched x.
pub fn first_integral_eval<T: Real>(
    p: &Params<T>,
    sector: Sector,
    x: &BranchedPoint<T>,
    y: Complex<T>,
) -> Result<EvalResult<T>> {
    first_integral_lifted(p, sector, &LensPoint::from_x(p, x), y)
}

/// Germs (w, w′) of the sector's basis pair after turning by θ = ±π around 0
/// or ε from the base segment, with the parametrization t = |x−center|/|ε|.
/// Solutions whose series argument would land on its ₂F₁ cut are rewritten
/// through the prolongation relations, so every series is evaluated off-cut
/// and all branching sits in explicit powers.
fn continued_germs<T: Real>(
    p: &Params<T>,
    sector: Sector,
    around: Around,
    theta: T,
    t: T,
) -> Result<((Complex<T>, Complex<T>), (Complex<T>, Complex<T>))> {
    let at = match around {
        Around::Zero => LensPoint {
            u: BranchedPoint::new(t, theta),
            v: BranchedPoint::new(T::one() + t, T::zero()),
        },
        Around::Eps => LensPoint {
            u: BranchedPoint::new(T::one() + t, T::zero()),
            v: BranchedPoint::new(t, theta),
        },
    };
    let one = Complex::new(T::one(), T::zero());
    let lin = |c: Complex<T>, g: (Complex<T>, Complex<T>), d: Complex<T>, h: (Complex<T>, Complex<T>)| {
        (c * g.0 + d * h.0, c * g.1 + d * h.1)
    };
    match (sector, around) {
        (Sector::SPlus, Around::Zero) => {
            let w2 = basis_value_and_deriv(p, Solution::W2, &at)?;
            let w1 = basis_value_and_deriv(p, Solution::W1, &at)?;
            let (ca, cb) = connection_coeffs(p, Prolongation::W3InB0)?;
            let w3 = lin(ca, w1, cb, w2);
            Ok((w2, w3))
        }
        (Sector::SPlus, Around::Eps) => {
            let w3 = basis_value_and_deriv(p, Solution::W3, &at)?;
            let w4 = basis_value_and_deriv(p, Solution::W4, &at)?;
            let (cd, ce) = connection_coeffs(p, Prolongation::W2InBeps)?;
            let w2 = lin(cd, w3, ce, w4);
            Ok((w2, w3))
        }
        (Sector::SMinus, Around::Zero) => {
            let (ca, cb) = connection_coeffs(p, Prolongation::W3InB0)?;
            let (cd, ce) = connection_coeffs(p, Prolongation::W2InBeps)?;
            if ce.norm() < T::of(1e-300) {
                return Err(EvalError::CoefficientPole("E = 0 in the w4 rewrite".into()));
            }
            let w1 = basis_value_and_deriv(p, Solution::W1, &at)?;
            let w2 = basis_value_and_deriv(p, Solution::W2, &at)?;
            let w4 = lin((one - cd * cb) / ce, w2, -cd * ca / ce, w1);
            Ok((w4, w1))
        }
        (Sector::SMinus, Around::Eps) => {
            let (ca, cb) = connection_coeffs(p, Prolongation::W3InB0)?;
            let (cd, ce) = connection_coeffs(p, Prolongation::W2InBeps)?;
            if ca.norm() < T::of(1e-300) {
                return Err(EvalError::CoefficientPole("A = 0 in the w1 rewrite".into()));
            }
            let w3 = basis_value_and_deriv(p, Solution::W3, &at)?;
            let w4 = basis_value_and_deriv(p, Solution::W4, &at)?;
            let w1 = lin((one - cb * cd) / ca, w3, -cb * ce / ca, w4);
            Ok((w4, w1))
        }
    }
}

/// I^{ε±} analytically continued by the lateral turn θ = ±π around 0 or ε,
/// evaluated at the endpoint parametrized by t = |x−center|/|ε| and the
/// (untransported) coordinate y.
pub fn first_integral_continued<T: Real>(
    p: &Params<T>,
    sector: Sector,
    around: Around,
    theta: T,
    t: T,
    y: Complex<T>,
) -> Result<EvalResult<T>> {
    let (gi, gj) = continued_germs(p, sector, around, theta, t)?;
    let eps = p.eps.value();
    let u = match around {
        Around::Zero => Complex::from_polar(t, theta),
        Around::Eps => Complex::new(T::one() + t, T::zero()),
    };
    let one = Complex::new(T::one(), T::zero());
    let q = eps * u * (eps * u - eps * one);
    integral_from_germs(p, sector, q, y, gi, gj)
}

/// Parameters of the universal unfolding ẋ = x²−ε,
/// ẏ = ab(x²−ε) + (1+(1−a−b)x)y + y², with singular points x = ±√ε.
#[derive(Debug, Clone)]
pub struct UniversalParams<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub eps: BranchedPoint<T>,
}

/// The vector field of the universal unfolding.
pub fn universal_field<T: Real>(
    up: &UniversalParams<T>,
    state: (Complex<T>, Complex<T>),
) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    let (x, y) = state;
    let q = x * x - up.eps.value();
    let lin = one + (one - up.a - up.b) * x;
    (q, up.a * up.b * q + lin * y + y * y)
}

/// The two square roots of ε as branched points; the first halves the lifted
/// argument, the second is shifted by π toward the admissible window
/// arg ∈ (γ/2, 2π−γ/2).
pub fn sqrt_branches<T: Real>(eps: &BranchedPoint<T>) -> (BranchedPoint<T>, BranchedPoint<T>) {
    let r = eps.modulus().sqrt();
    let th = eps.argument() * T::of(0.5);
    let other = if th < T::PI() { th + T::PI() } else { th - T::PI() };
    (BranchedPoint::new(r, th), BranchedPoint::new(r, other))
}

/// Data of the reduction of the universal unfolding to the Gauss equation:
/// with u = (x+√ε)/(2√ε) the linear equation (x²−ε)w″+{−1+(a+b+1)x}w′+abw=0
/// becomes hypergeometric with lower parameter c, and the first integral is
/// normalized by κ⁺(√ε).
#[derive(Debug, Clone, Copy)]
pub struct UniversalMap<T> {
    pub c: Complex<T>,
    pub kappa_universal: Complex<T>,
}

/// c = 1/(2√ε) + (a+b+1)/2 and κ⁺(√ε) = (2√ε)^{1−a−b} e^{πi c} for a chosen
/// square-root branch.
pub fn universal_map<T: Real>(up: &UniversalParams<T>, root: &BranchedPoint<T>) -> UniversalMap<T> {
    let one = Complex::new(T::one(), T::zero());
    let half = Complex::new(T::of(0.5), T::zero());
    let c = half / root.value() + half * (up.a + up.b + one);
    let two_root = BranchedPoint::new(root.modulus() * T::of(2.0), root.argument());
    let ipi = Complex::new(T::zero(), T::PI());
    let kappa_universal = two_root.pow(one - up.a - up.b) * (ipi * c).exp();
    UniversalMap { c, kappa_universal }
}

/// L(ε) = λ⁺(√ε)·μ⁺(√ε) = −(1−e^{−2πia})(1−e^{−2πib}): evaluates the product
/// on both square-root branches and checks both against the closed form,
/// which is returned.
pub fn l_universal<T: Real>(up: &UniversalParams<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let m2pi_i = Complex::new(T::zero(), -(T::PI() + T::PI()));
    let closed = -(one - (m2pi_i * up.a).exp()) * (one - (m2pi_i * up.b).exp());
    let (r1, r2) = sqrt_branches(&up.eps);
    for root in [r1, r2] {
        let p = Params::new(up.a, up.b, root);
        let s = crate::stokes::unfolded_multipliers(&p, Sector::SPlus);
        let prod = s.lambda * s.mu;
        let d = (prod - closed).norm();
        if d > T::of(1e-10) * (T::one() + closed.norm()) {
            return Err(EvalError::BranchDisagreement(d.to_f64().unwrap_or(f64::NAN)));
        }
    }
    Ok(closed)
}
