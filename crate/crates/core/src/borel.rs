//! Borel summation of the divergent confluent series ĝ(x) = ₂F₀(a,b;−x) and
//! ĥ(x) = ₂F₀(1−a,1−b;x): the Borel transform, a Laplace-quadrature oracle,
//! the closed-form ₁F₁ decomposition with its lateral branches g±, h±, k±,
//! the limit quotient H⁰, and the Stokes-jump identities
//! g⁺(xe^{2πi}) − g⁻(x) = λ k(x),
//! k⁺(x) − e^{2πi(1−a−b)} k⁻(xe^{−2πi}) = μ g(x).

use num_complex::Complex;

use crate::branched::BranchedPoint;
use crate::error::{EvalError, Result};
use crate::gamma::gamma_ratio;
use crate::hyp::{f11, f21};
use crate::scalar::Real;
use crate::sectors::EvalResult;

/// Continuation history around x = 0. `Plus`/`Minus` select the lateral
/// branch reached by turning in the positive/negative direction from the
/// base sector; the tag composes with ±2π shifts of the lifted argument,
/// it does not refer to the current value of arg(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LateralTag {
    None,
    Plus,
    Minus,
}

/// Which of the two limit quotients to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H0Side {
    /// H⁰ = k/g⁻ (Re x < 0) or k⁺/g (Re x > 0).
    Primary,
    /// H⁰′ = k⁻/g (Re x > 0) or k/g⁺ (Re x < 0).
    Primed,
}

/// Which function `h_k_closed_form` returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HOrK {
    H,
    K,
}

/// Exponent guard for e^{1/x} and the Laplace kernel.
const EXP_OVERFLOW: f64 = 700.0;
/// laplace_sum refuses directions within this angle of the singular ray ℝ⁻.
const SINGULAR_GUARD: f64 = 0.1;

/// Borel transform of ĝ: dividing (a)ₙ(b)ₙ/n! by n! gives the convergent
/// series ₂F₁(a, b, 1; −ξ). The transform is analytic off the cut (−∞, −1],
/// so a plain complex argument suffices; on-cut points get principal values.
pub fn borel_transform<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    xi: Complex<T>,
) -> Result<EvalResult<T>> {
    if xi.norm() == T::zero() {
        return Ok(EvalResult {
            value: Complex::new(T::one(), T::zero()),
            truncation_bound: T::zero(),
            reciprocal: false,
        });
    }
    let z = BranchedPoint::from_value(-xi);
    let s = f21(a, b, Complex::new(T::one(), T::zero()), &z)?;
    Ok(EvalResult {
        value: s.value,
        truncation_bound: s.truncation_bound,
        reciprocal: false,
    })
}

// Gauss 7 / Kronrod 15 abscissae and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7K15 panel on [lo, hi]: Kronrod value and |Kronrod − Gauss|.
fn qk15<T: Real, F>(f: &F, lo: T, hi: T) -> Result<(Complex<T>, T)>
where
    F: Fn(T) -> Result<Complex<T>>,
{
    let half = (hi - lo) * T::of(0.5);
    let mid = (hi + lo) * T::of(0.5);
    let zero = Complex::new(T::zero(), T::zero());
    let mut kron = zero;
    let mut gauss = zero;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let nodes: &[T] = if i == 7 {
            &[T::zero()]
        } else {
            &[T::of(x), T::of(-x)]
        };
        let mut pair = zero;
        for &n in nodes {
            pair = pair + f(mid + half * n)?;
        }
        kron = kron + pair.scale(T::of(wk));
        if i % 2 == 1 {
            gauss = gauss + pair.scale(T::of(WG[i / 2]));
        } else if i == 7 {
            gauss = gauss + pair.scale(T::of(WG[3]));
        }
    }
    Ok((kron.scale(half), (kron - gauss).norm() * half.abs()))
}

/// Adaptive G7K15 over [0, len]: bisect the worst panel until the summed
/// error estimate meets `tol` or the panel budget runs out.
fn adaptive_quadrature<T: Real, F>(f: &F, len: T, tol: T) -> Result<(Complex<T>, T)>
where
    F: Fn(T) -> Result<Complex<T>>,
{
    // (lo, hi, value, err)
    let mut panels: Vec<(T, T, Complex<T>, T)> = Vec::new();
    // Seed with a few panels: the integrand is steep near 0.
    let seeds = 8usize;
    for i in 0..seeds {
        let lo = len * T::of(i as f64 / seeds as f64);
        let hi = len * T::of((i + 1) as f64 / seeds as f64);
        let (v, e) = qk15(f, lo, hi)?;
        panels.push((lo, hi, v, e));
    }
    for _ in 0..400 {
        let total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.3);
        if total_err <= tol {
            let value = panels
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p.2);
            return Ok((value, total_err));
        }
        // Split the worst panel.
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty panel list");
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = (lo + hi) * T::of(0.5);
        let (v1, e1) = qk15(f, lo, mid)?;
        let (v2, e2) = qk15(f, mid, hi)?;
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    {
        let total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.3);
        Err(EvalError::QuadratureNonconvergent(
            total_err.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

/// Borel sum of ĝ in the direction e^{iθ}:
/// (1/x) ∫₀^{∞e^{iθ}} e^{−ξ/x} ₂F₁(a,b,1;−ξ) dξ.
///
/// The integration range is truncated where the exponential kernel falls
/// below e^{−45}; the transform grows at most polynomially, so the dropped
/// tail is far below the 1e-9 error target.
pub fn laplace_sum<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    x: &BranchedPoint<T>,
    direction: T,
) -> Result<EvalResult<T>> {
    // Distance of the direction from the singular ray ℝ⁻ (mod 2π).
    let two_pi = T::of(2.0) * T::PI();
    let mut d = direction - T::PI();
    d = d - two_pi * (d / two_pi).round();
    if d.abs() < T::of(SINGULAR_GUARD) {
        return Err(EvalError::SingularDirection);
    }
    let e_dir = Complex::new(direction.cos(), direction.sin());
    let rate = (e_dir / x.value()).re;
    if rate <= T::zero() {
        return Err(EvalError::SingularDirection);
    }
    let len = T::of(45.0) / rate;
    let inv_x = Complex::new(T::one(), T::zero()) / x.value();
    let integrand = |t: T| -> Result<Complex<T>> {
        let xi = e_dir.scale(t);
        let kernel = (-xi * inv_x).exp();
        let bt = borel_transform(a, b, xi)?;
        Ok(kernel * bt.value)
    };
    let (integral, err) = adaptive_quadrature(&integrand, len, T::of(1e-12))?;
    let value = integral * e_dir * inv_x;
    Ok(EvalResult {
        value,
        truncation_bound: err * inv_x.norm() + T::of(1e-14) * (T::one() + value.norm()),
        reciprocal: false,
    })
}

/// Reduce the lifted argument of `x` into the window (c−π, c+π] around the
/// center of the lateral branch selected by `tag`. The lateral sums are
/// univalued functions of x, so shifting by full turns reaches the canonical
/// sheet of the branched powers inside the decomposition.
fn window<T: Real>(x: &BranchedPoint<T>, tag: LateralTag) -> BranchedPoint<T> {
    let center = match tag {
        LateralTag::None => T::zero(),
        LateralTag::Plus => T::PI(),
        LateralTag::Minus => -T::PI(),
    };
    let two_pi = T::of(2.0) * T::PI();
    let shift = ((x.argument() - center) / two_pi).round();
    BranchedPoint::new(x.modulus(), x.argument() - two_pi * shift)
}

fn g_formula<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    z: &BranchedPoint<T>,
) -> Result<EvalResult<T>> {
    let inv = Complex::new(T::one(), T::zero()) / z.value();
    let f1 = f11(a, a + Complex::new(T::one(), T::zero()) - b, inv)?;
    let f2 = f11(b, b + Complex::new(T::one(), T::zero()) - a, inv)?;
    let c1 = gamma_ratio(&[b - a], &[b]);
    let c2 = gamma_ratio(&[a - b], &[a]);
    let value = c1 * z.pow(-a) * f1.value + c2 * z.pow(-b) * f2.value;
    Ok(EvalResult {
        value,
        truncation_bound: f1.truncation_bound * (c1 * z.pow(-a)).norm()
            + f2.truncation_bound * (c2 * z.pow(-b)).norm(),
        reciprocal: false,
    })
}

fn near_integer_difference<T: Real>(a: Complex<T>, b: Complex<T>, tol: T) -> bool {
    let d = a - b;
    d.im.abs() <= tol && (d.re - d.re.round()).abs() <= tol
}

/// Borel sum g(x) and its lateral branches, via the ₁F₁ decomposition
/// g(x) = Γ(b−a)/Γ(b) x^{−a} ₁F₁(a, a+1−b; 1/x)
///       + Γ(a−b)/Γ(a) x^{−b} ₁F₁(b, b+1−a; 1/x).
///
/// For a−b ∈ ℤ the decomposition degenerates; the value is then obtained as
/// a Richardson limit over a ↦ a+h (reduced accuracy, target 1e-6).
pub fn g_closed_form<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    x: &BranchedPoint<T>,
    tag: LateralTag,
) -> Result<EvalResult<T>> {
    let z = window(x, tag);
    if !near_integer_difference(a, b, T::of(1e-8)) {
        return g_formula(a, b, &z);
    }
    // Two Richardson levels over a ↦ a + h. The step cannot be made small:
    // parameters like a+h−b ≈ −1+h carry an absolute representation error
    // ~ulp(1), i.e. a relative error ~1e-16/h that the near-pole Γ and ₁F₁
    // factors inherit, so a moderate h with second-order extrapolation beats
    // a tiny h.
    let h0 = T::of(4e-3);
    let eval = |h: T| -> Result<Complex<T>> {
        Ok(g_formula(a + Complex::new(h, T::zero()), b, &z)?.value)
    };
    let f1 = eval(h0)?;
    let f2 = eval(h0 * T::of(0.5))?;
    let f4 = eval(h0 * T::of(0.25))?;
    let f8 = eval(h0 * T::of(0.125))?;
    let two = Complex::new(T::of(2.0), T::zero());
    let r1 = two * f2 - f1;
    let r2 = two * f4 - f2;
    let r3 = two * f8 - f4;
    let third = Complex::new(T::of(1.0 / 3.0), T::zero());
    let s1 = (two * two * r2 - r1) * third;
    let s2 = (two * two * r3 - r2) * third;
    let disagreement = (s1 - s2).norm() / s2.norm().max(T::of(1e-300));
    if disagreement > T::of(1e-4) {
        return Err(EvalError::ExtrapolationUnstable(
            disagreement.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(EvalResult {
        value: s2,
        truncation_bound: (s1 - s2).norm(),
        reciprocal: false,
    })
}

/// Borel sum h(x) of ĥ = ₂F₀(1−a,1−b;x), and k(x) = e^{1/x} x^{1−a−b} h(x),
/// with their lateral branches.
///
/// h is g with (a,b) ↦ (1−a,1−b) at the reflected point −x, realized as the
/// argument shift +π; the multivaluedness of k lives entirely in the factor
/// x^{1−a−b}, which uses the raw lifted argument of `x`.
pub fn h_k_closed_form<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    x: &BranchedPoint<T>,
    tag: LateralTag,
    want: HOrK,
) -> Result<EvalResult<T>> {
    let one = Complex::new(T::one(), T::zero());
    let reflected = BranchedPoint::new(x.modulus(), x.argument() + T::PI());
    let h = g_closed_form(one - a, one - b, &reflected, tag)?;
    if want == HOrK::H {
        return Ok(h);
    }
    let inv_x = one / x.value();
    if inv_x.re.abs() > T::of(EXP_OVERFLOW) {
        return Err(EvalError::ContinuationFailure(
            "exponent overflow in e^{1/x}".into(),
        ));
    }
    let factor = inv_x.exp() * x.pow(one - a - b);
    Ok(EvalResult {
        value: factor * h.value,
        truncation_bound: h.truncation_bound * factor.norm(),
        reciprocal: false,
    })
}

/// The ε = 0 limit quotient H⁰ (or its primed companion), analytic off the
/// imaginary-axis cut, with values on the Riemann sphere: near a pole of the
/// quotient the reciprocal is returned with the `reciprocal` flag set.
pub fn h0_eval<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    x: &BranchedPoint<T>,
    side: H0Side,
) -> Result<EvalResult<T>> {
    let re = x.value().re;
    if re.abs() < T::of(1e-12) * x.modulus() {
        return Err(EvalError::OnCut);
    }
    let right = re > T::zero();
    let (k_tag, g_tag) = match (side, right) {
        (H0Side::Primary, true) => (LateralTag::Plus, LateralTag::None),
        (H0Side::Primary, false) => (LateralTag::None, LateralTag::Minus),
        (H0Side::Primed, true) => (LateralTag::Minus, LateralTag::None),
        (H0Side::Primed, false) => (LateralTag::None, LateralTag::Plus),
    };
    let num = h_k_closed_form(a, b, x, k_tag, HOrK::K)?;
    let den = g_closed_form(a, b, x, g_tag)?;
    let flip = den.value.norm() < num.value.norm() * T::of(1e-200);
    let value = if flip {
        den.value / num.value
    } else {
        num.value / den.value
    };
    let rel = (num.truncation_bound / num.value.norm().max(T::of(1e-300)))
        + (den.truncation_bound / den.value.norm().max(T::of(1e-300)));
    Ok(EvalResult {
        value,
        truncation_bound: rel * value.norm(),
        reciprocal: flip,
    })
}
