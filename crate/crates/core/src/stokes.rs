//! Stokes multipliers λ, μ of the confluent equation, their unfolded
//! counterparts λ±(ε), μ±(ε), the monodromy matrices in the mixed bases,
//! the ε-independent product invariant L = λμ, and the logarithmic-terms
//! predicate.

use num_complex::Complex;

use crate::branched::BranchedPoint;
use crate::error::{EvalError, Result};
use crate::gamma::{ln_gamma, reciprocal_gamma};
use crate::path::PathSpec;
use crate::scalar::Real;
use crate::sectors::{
    basis_eval_lifted, connection_coeffs, kappa, BasisTag, LensPoint, Params, Prolongation,
    Sector, Solution,
};

/// Zero-detection threshold for the multipliers (reciprocal_gamma returns
/// exact zeros at the poles, so only rounding noise must be absorbed).
pub const ZERO_TOL: f64 = 1e-12;

/// A pair (λ, μ) of Stokes multipliers, unfolded or at the limit.
#[derive(Debug, Clone, Copy)]
pub struct StokesPair<T> {
    pub lambda: Complex<T>,
    pub mu: Complex<T>,
}

/// Monodromy matrix in a mixed basis, with the basis and loop recorded.
#[derive(Debug, Clone, Copy)]
pub struct Mat2<T> {
    pub m11: Complex<T>,
    pub m12: Complex<T>,
    pub m21: Complex<T>,
    pub m22: Complex<T>,
    pub basis: BasisTag,
    pub loop_spec: PathSpec<T>,
}

impl<T: Real> Mat2<T> {
    pub fn new(
        m11: Complex<T>,
        m12: Complex<T>,
        m21: Complex<T>,
        m22: Complex<T>,
        sector: Sector,
        base: Complex<T>,
        center: Complex<T>,
    ) -> Self {
        let basis = match sector {
            Sector::SPlus => BasisTag::BPlus,
            Sector::SMinus => BasisTag::BMinus,
        };
        Self {
            m11,
            m12,
            m21,
            m22,
            basis,
            loop_spec: PathSpec {
                base,
                center,
                turn: T::of(2.0) * T::PI(),
            },
        }
    }

    pub fn det(&self) -> Complex<T> {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    pub fn mul(&self, o: &Self) -> [[Complex<T>; 2]; 2] {
        [
            [
                self.m11 * o.m11 + self.m12 * o.m21,
                self.m11 * o.m12 + self.m12 * o.m22,
            ],
            [
                self.m21 * o.m11 + self.m22 * o.m21,
                self.m21 * o.m12 + self.m22 * o.m22,
            ],
        ]
    }
}

fn minus_two_pi_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), -(T::PI() + T::PI()))
}

/// Limit Stokes multipliers of the confluent equation:
/// λ = −2πi e^{iπ(1−a−b)} / (Γ(a)Γ(b)),  μ = −2πi / (Γ(1−a)Γ(1−b)).
pub fn stokes_limits<T: Real>(a: Complex<T>, b: Complex<T>) -> StokesPair<T> {
    let one = Complex::new(T::one(), T::zero());
    let ipi = Complex::new(T::zero(), T::PI());
    let lambda =
        minus_two_pi_i::<T>() * (ipi * (one - a - b)).exp() * reciprocal_gamma(a) * reciprocal_gamma(b);
    let mu = minus_two_pi_i::<T>() * reciprocal_gamma(one - a) * reciprocal_gamma(one - b);
    StokesPair { lambda, mu }
}

/// Unfolded multipliers on the sector:
///   λ⁺(ε) = −2πi e^{iπ(1−a−b)}/(Γ(a)Γ(b)) · ε^{a+b−1} Γ(a+b+1/ε)/Γ(1+1/ε)
///   μ⁺(ε) = −2πi/(Γ(1−a)Γ(1−b)) · ε^{1−a−b} Γ(1+1/ε)/Γ(a+b+1/ε)
///   λ⁻(ε) = −2πi/(Γ(a)Γ(b)) · ε^{a+b−1} Γ(1−1/ε)/Γ(2−1/ε−a−b)
///   μ⁻(ε) = −2πi/(Γ(1−a)Γ(1−b)) · (εe^{iπ})^{1−a−b} Γ(2−1/ε−a−b)/Γ(1−1/ε)
/// The ε-powers and Γ-ratios are combined in log space, so the formulas stay
/// finite for |1/ε| up to 1e4. They are pole-free on the whole sector.
pub fn unfolded_multipliers<T: Real>(p: &Params<T>, sector: Sector) -> StokesPair<T> {
    let one = Complex::new(T::one(), T::zero());
    let two = Complex::new(T::of(2.0), T::zero());
    let ipi = Complex::new(T::zero(), T::PI());
    let ie = p.inv_eps();
    let ab = p.a + p.b;
    let ln_eps = p.eps.ln();
    let rg_ab = reciprocal_gamma(p.a) * reciprocal_gamma(p.b);
    let rg_1ab = reciprocal_gamma(one - p.a) * reciprocal_gamma(one - p.b);
    match sector {
        Sector::SPlus => {
            let ln_ratio = ln_gamma(ab + ie) - ln_gamma(one + ie);
            let lambda = minus_two_pi_i::<T>()
                * (ipi * (one - ab)).exp()
                * rg_ab
                * ((ab - one) * ln_eps + ln_ratio).exp();
            let mu = minus_two_pi_i::<T>() * rg_1ab * ((one - ab) * ln_eps - ln_ratio).exp();
            StokesPair { lambda, mu }
        }
        Sector::SMinus => {
            let ln_ratio = ln_gamma(one - ie) - ln_gamma(two - ie - ab);
            let lambda = minus_two_pi_i::<T>() * rg_ab * ((ab - one) * ln_eps + ln_ratio).exp();
            let mu = minus_two_pi_i::<T>()
                * rg_1ab
                * ((one - ab) * (ln_eps + ipi) - ln_ratio).exp();
            StokesPair { lambda, mu }
        }
    }
}

/// The product invariant L = λ^{±}(ε) μ^{±}(ε)
/// = −(1 − e^{−2πia})(1 − e^{−2πib}), independent of ε and of the sector.
pub fn product_l<T: Real>(p: &Params<T>, sector: Sector) -> Complex<T> {
    let s = unfolded_multipliers(p, sector);
    s.lambda * s.mu
}

/// Which singular point a monodromy loop surrounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Around {
    Zero,
    Eps,
}

/// The analytic monodromy matrices of the mixed bases, with rows acting on
/// the column (κ±w_i, w_j)ᵀ of the ordered basis:
///   S⁺, around 0:  [e^{2πi/ε}, 0; λ⁺(ε), 1]
///   S⁺, around ε:  [e^{2πi(1−a−b−1/ε)}, μ⁺(ε); 0, 1]
///   S⁻, around ε:  [e^{2πi(1−1/ε−a−b)}, 0; λ⁻(ε), 1]
///   S⁻, around 0:  [e^{2πi/ε}, μ⁻(ε); 0, 1]
pub fn monodromy_matrix<T: Real>(p: &Params<T>, sector: Sector, around: Around) -> Mat2<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let two_pi_i = Complex::new(T::zero(), T::PI() + T::PI());
    let ie = p.inv_eps();
    let ab = p.a + p.b;
    let s = unfolded_multipliers(p, sector);
    let eps = p.eps.value();
    let base = eps.scale(T::of(0.5));
    let center = match around {
        Around::Zero => zero,
        Around::Eps => eps,
    };
    let (m11, m12, m21) = match (sector, around) {
        (Sector::SPlus, Around::Zero) => ((two_pi_i * ie).exp(), zero, s.lambda),
        (Sector::SPlus, Around::Eps) => ((two_pi_i * (one - ab - ie)).exp(), s.mu, zero),
        (Sector::SMinus, Around::Eps) => ((two_pi_i * (one - ie - ab)).exp(), zero, s.lambda),
        (Sector::SMinus, Around::Zero) => ((two_pi_i * ie).exp(), s.mu, zero),
    };
    Mat2::new(m11, m12, m21, one, sector, base, center)
}

/// The logarithmic-terms predicate at fixed (a, b): nonzero λ^{±}(ε) means
/// the second basis element (w3 on S⁺, w1 on S⁻) is not a monodromy
/// eigenvector — equivalently the series g is divergent; nonzero μ^{±}(ε)
/// plays the same role for w2/w4 and the series h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogTermsFlags {
    pub w3_or_w1_obstructed: bool,
    pub w2_or_w4_obstructed: bool,
}

pub fn log_terms_predicate<T: Real>(p: &Params<T>, sector: Sector) -> LogTermsFlags {
    let s = unfolded_multipliers(p, sector);
    let tol = T::of(ZERO_TOL);
    LogTermsFlags {
        w3_or_w1_obstructed: s.lambda.norm() > tol,
        w2_or_w4_obstructed: s.mu.norm() > tol,
    }
}

/// Residuals of the wild/continuous monodromy split of H^{ε±}:
/// `around_eps` checks the turn around ε, `around_zero` the turn around 0.
/// Both are |LHS − RHS| / (|LHS| + |RHS|) of the corresponding relation.
#[derive(Debug, Clone, Copy)]
pub struct SplitResiduals<T> {
    pub around_eps: T,
    pub around_zero: T,
}

/// Lateral continuations of the basis solutions, starting on (0, ε) and
/// turning by θ = ±π around 0 or ε. A turn of θ around 0 lifts u = x/ε to
/// argument θ while v = 1 − u stays principal; a turn around ε does the
/// opposite. Solutions whose series argument would land on its cut are
/// rewritten through the prolongation relations first, so every ₂F₁ is
/// evaluated off-cut and all branching sits in explicit powers.
fn h_continued<T: Real>(
    p: &Params<T>,
    sector: Sector,
    around: Around,
    theta: T,
    t: T,
) -> Result<Complex<T>> {
    let k = kappa(p, sector);
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
    match (sector, around) {
        (Sector::SPlus, Around::Zero) => {
            // w2 is direct in u; w3 = A w1 + B w2 via the basis at 0.
            let w2 = basis_eval_lifted(p, Solution::W2, &at)?.value;
            let (ca, cb) = connection_coeffs(p, Prolongation::W3InB0)?;
            let w1 = basis_eval_lifted(p, Solution::W1, &at)?.value;
            let w3 = ca * w1 + cb * w2;
            Ok(k * w2 / w3)
        }
        (Sector::SPlus, Around::Eps) => {
            // w3 is direct in v; w2 = D w3 + E w4 via the basis at ε.
            let w3 = basis_eval_lifted(p, Solution::W3, &at)?.value;
            let (cd, ce) = connection_coeffs(p, Prolongation::W2InBeps)?;
            let w4 = basis_eval_lifted(p, Solution::W4, &at)?.value;
            let w2 = cd * w3 + ce * w4;
            Ok(k * w2 / w3)
        }
        (Sector::SMinus, Around::Zero) => {
            // w1, w2 are direct in u; w4 = ((1−DB) w2 − DA w1)/E.
            let (ca, cb) = connection_coeffs(p, Prolongation::W3InB0)?;
            let (cd, ce) = connection_coeffs(p, Prolongation::W2InBeps)?;
            if ce.norm() < T::of(1e-300) {
                return Err(EvalError::CoefficientPole("E = 0 in the w4 rewrite".into()));
            }
            let one = Complex::new(T::one(), T::zero());
            let w1 = basis_eval_lifted(p, Solution::W1, &at)?.value;
            let w2 = basis_eval_lifted(p, Solution::W2, &at)?.value;
            let w4 = ((one - cd * cb) * w2 - cd * ca * w1) / ce;
            Ok(k * w4 / w1)
        }
        (Sector::SMinus, Around::Eps) => {
            // w3, w4 are direct in v; w1 = ((1−BD) w3 − BE w4)/A.
            let (ca, cb) = connection_coeffs(p, Prolongation::W3InB0)?;
            let (cd, ce) = connection_coeffs(p, Prolongation::W2InBeps)?;
            if ca.norm() < T::of(1e-300) {
                return Err(EvalError::CoefficientPole("A = 0 in the w1 rewrite".into()));
            }
            let one = Complex::new(T::one(), T::zero());
            let w3 = basis_eval_lifted(p, Solution::W3, &at)?.value;
            let w4 = basis_eval_lifted(p, Solution::W4, &at)?.value;
            let w1 = ((one - cb * cd) * w3 - cb * ce * w4) / ca;
            Ok(k * w4 / w1)
        }
    }
}

/// Verify the wild/continuous split of the monodromy of H^{ε±} at the point
/// parametrized by t = |x−center|/|ε| of the lateral rays:
///   S⁺, around ε:  H_{(ε,−π)} = e^{2πi(a+b−1+1/ε)} (H_{(ε,π)} − μ⁺)
///   S⁺, around 0:  1/H_{(0,π)} = e^{−2πi/ε} (1/H_{(0,−π)} + λ⁺)
///   S⁻, around 0:  H_{(0,−π)} = e^{−2πi/ε} (H_{(0,π)} − μ⁻)
///   S⁻, around ε:  1/H_{(ε,π)} = e^{2πi(a+b−1+1/ε)} (1/H_{(ε,−π)} + λ⁻)
pub fn wild_continuous_split_check<T: Real>(
    p: &Params<T>,
    sector: Sector,
    t: T,
) -> Result<SplitResiduals<T>> {
    let one = Complex::new(T::one(), T::zero());
    let two_pi_i = Complex::new(T::zero(), T::PI() + T::PI());
    let ie = p.inv_eps();
    let ab = p.a + p.b;
    let s = unfolded_multipliers(p, sector);
    let pi = T::PI();
    let rel = |l: Complex<T>, r: Complex<T>| (l - r).norm() / (l.norm() + r.norm());
    let wild_e = (two_pi_i * (ab - one + ie)).exp();
    let wild_0 = (-two_pi_i * ie).exp();
    match sector {
        Sector::SPlus => {
            let h_e_plus = h_continued(p, sector, Around::Eps, pi, t)?;
            let h_e_minus = h_continued(p, sector, Around::Eps, -pi, t)?;
            let around_eps = rel(h_e_minus, wild_e * (h_e_plus - s.mu));
            let h_0_plus = h_continued(p, sector, Around::Zero, pi, t)?;
            let h_0_minus = h_continued(p, sector, Around::Zero, -pi, t)?;
            let around_zero = rel(h_0_plus.inv(), wild_0 * (h_0_minus.inv() + s.lambda));
            Ok(SplitResiduals {
                around_eps,
                around_zero,
            })
        }
        Sector::SMinus => {
            let h_0_plus = h_continued(p, sector, Around::Zero, pi, t)?;
            let h_0_minus = h_continued(p, sector, Around::Zero, -pi, t)?;
            let around_zero = rel(h_0_minus, wild_0 * (h_0_plus - s.mu));
            let h_e_plus = h_continued(p, sector, Around::Eps, pi, t)?;
            let h_e_minus = h_continued(p, sector, Around::Eps, -pi, t)?;
            let around_eps = rel(h_e_plus.inv(), wild_e * (h_e_minus.inv() + s.lambda));
            Ok(SplitResiduals {
                around_eps,
                around_zero,
            })
        }
    }
}
