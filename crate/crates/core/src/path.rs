//! Transport of solutions along complex paths: an adaptive embedded
//! Runge–Kutta 7(8) pair driving the linear second-order equation
//! x(x−ε) w″ + {1−ε+(a+b+1)x} w′ + ab w = 0 and the associated Riccati
//! system. Serves as the independent oracle for every analytic continuation
//! and monodromy formula in the crate.

use num_complex::Complex;

use crate::branched::BranchedPoint;
use crate::error::{EvalError, Result};
use crate::scalar::Real;
use crate::sectors::{basis_value_and_deriv, kappa, LensPoint, Params, Sector, Solution};
use crate::stokes::Mat2;

/// Local error tolerance of the adaptive stepper.
pub const LOCAL_TOL: f64 = 1e-12;
/// Local tolerance for full monodromy loops. A 2π loop at radius |ε|/2
/// accumulates ~|2π/ε| radians of solution phase, which amplifies local
/// errors by roughly 10⁶; 1e-13 keeps the global loop error below 1e-6.
pub const LOOP_TOL: f64 = 1e-13;
/// Paths must keep this clearance (relative to |ε|) from both singular points.
pub const CLEARANCE: f64 = 0.1;

// Fehlberg's 13-stage embedded 7(8) pair.
const STAGES: usize = 13;
const RK_C: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];
const RK_A: [[f64; STAGES - 1]; STAGES - 1] = [
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 0.25, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0, 0.0, 0.0, 0.0, 0.0],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];
/// 8th-order weights (used for propagation).
const RK_B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

/// One embedded step from s with size h. Returns the 8th-order update and the
/// embedded error vector (7th − 8th = 41/840 (k0 + k10 − k11 − k12) h).
pub fn rkf_step<T: Real, const N: usize, F>(
    f: &F,
    s: T,
    h: T,
    y: &[Complex<T>; N],
) -> ([Complex<T>; N], [Complex<T>; N])
where
    F: Fn(T, &[Complex<T>; N]) -> [Complex<T>; N],
{
    let zero = Complex::new(T::zero(), T::zero());
    let mut k = [[zero; N]; STAGES];
    k[0] = f(s, y);
    for i in 1..STAGES {
        let mut yi = *y;
        for j in 0..i {
            let a = T::of(RK_A[i - 1][j]);
            if a != T::zero() {
                for n in 0..N {
                    yi[n] = yi[n] + k[j][n].scale(a * h);
                }
            }
        }
        k[i] = f(s + T::of(RK_C[i]) * h, &yi);
    }
    let mut out = *y;
    for i in 0..STAGES {
        let b = T::of(RK_B8[i]);
        if b != T::zero() {
            for n in 0..N {
                out[n] = out[n] + k[i][n].scale(b * h);
            }
        }
    }
    let mut err = [zero; N];
    let w = T::of(41.0 / 840.0) * h;
    for n in 0..N {
        err[n] = (k[0][n] + k[10][n] - k[11][n] - k[12][n]).scale(w);
    }
    (out, err)
}

/// Adaptive integration of dy/ds = f(s, y) over s ∈ [0, 1].
/// Returns the final state and an accumulated global error estimate.
pub fn integrate<T: Real, const N: usize, F>(
    f: &F,
    y0: [Complex<T>; N],
    tol: T,
) -> Result<([Complex<T>; N], T, usize)>
where
    F: Fn(T, &[Complex<T>; N]) -> [Complex<T>; N],
{
    let mut s = T::zero();
    let mut y = y0;
    let mut h = T::of(0.05);
    let mut global = T::zero();
    let mut steps = 0usize;
    let h_min = T::of(1e-12);
    while s < T::one() {
        if h > T::one() - s {
            h = T::one() - s;
        }
        let (y_new, err) = rkf_step(f, s, h, &y);
        // Error relative to tol·‖y‖∞: a per-component absolute floor would
        // stop resolving states whose overall magnitude is far below 1.
        let mut ymax = T::zero();
        for n in 0..N {
            ymax = ymax.max(y[n].norm());
        }
        let scale = if ymax > T::zero() { tol * ymax } else { tol };
        let mut ratio = T::zero();
        for n in 0..N {
            ratio = ratio.max(err[n].norm() / scale);
        }
        if ratio <= T::one() {
            s = s + h;
            y = y_new;
            let mut e = T::zero();
            for n in 0..N {
                e = e.max(err[n].norm());
            }
            global = global + e;
            steps += 1;
            if steps > 2_000_000 {
                return Err(EvalError::StepUnderflow);
            }
        }
        let factor = if ratio > T::zero() {
            (T::of(0.9) * ratio.powf(T::of(-0.125))).max(T::of(0.2)).min(T::of(5.0))
        } else {
            T::of(5.0)
        };
        h = h * factor;
        if h < h_min && s < T::one() {
            return Err(EvalError::StepUnderflow);
        }
    }
    Ok((y, global, steps))
}

/// A piece of a complex path, parametrized over s ∈ [0, 1].
#[derive(Debug, Clone, Copy)]
pub enum PathSegment<T> {
    Line {
        from: Complex<T>,
        to: Complex<T>,
    },
    /// Circular arc around `center`, radius `radius`, argument swept linearly
    /// from `arg_from` to `arg_to` (angles unreduced, so |sweep| > 2π works).
    Arc {
        center: Complex<T>,
        radius: T,
        arg_from: T,
        arg_to: T,
    },
}

impl<T: Real> PathSegment<T> {
    pub fn point(&self, s: T) -> Complex<T> {
        match *self {
            PathSegment::Line { from, to } => from + (to - from).scale(s),
            PathSegment::Arc {
                center,
                radius,
                arg_from,
                arg_to,
            } => {
                let th = arg_from + (arg_to - arg_from) * s;
                center + Complex::new(T::zero(), th).exp().scale(radius)
            }
        }
    }

    pub fn velocity(&self, s: T) -> Complex<T> {
        match *self {
            PathSegment::Line { from, to } => to - from,
            PathSegment::Arc {
                center: _,
                radius,
                arg_from,
                arg_to,
            } => {
                let dth = arg_to - arg_from;
                let th = arg_from + dth * s;
                let i = Complex::new(T::zero(), T::one());
                i * Complex::new(T::zero(), th).exp().scale(radius * dth)
            }
        }
    }

    /// Minimum distance from the segment to a point (sampled; the paths here
    /// are short arcs and lines, so 64 samples bound the distance well).
    fn min_distance(&self, q: Complex<T>) -> T {
        let mut d = T::infinity();
        for k in 0..=64 {
            let s = T::of(k as f64 / 64.0);
            d = d.min((self.point(s) - q).norm());
        }
        d
    }
}

/// A loop specification: start at `base`, turn by `turn` around `center`
/// along the circle through the base point.
#[derive(Debug, Clone, Copy)]
pub struct PathSpec<T> {
    pub base: Complex<T>,
    pub center: Complex<T>,
    pub turn: T,
}

impl<T: Real> PathSpec<T> {
    pub fn segments(&self) -> Vec<PathSegment<T>> {
        let rel = self.base - self.center;
        let arg0 = rel.im.atan2(rel.re);
        vec![PathSegment::Arc {
            center: self.center,
            radius: rel.norm(),
            arg_from: arg0,
            arg_to: arg0 + self.turn,
        }]
    }
}

/// Result of a transport: final state plus an accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct TransportResult<T, const N: usize> {
    pub state: [Complex<T>; N],
    pub error_estimate: T,
    pub steps: usize,
}

fn check_clearance<T: Real>(p: &Params<T>, segments: &[PathSegment<T>]) -> Result<()> {
    let eps = p.eps.value();
    let min_d = T::of(CLEARANCE) * eps.norm();
    for seg in segments {
        let d0 = seg.min_distance(Complex::new(T::zero(), T::zero()));
        let de = seg.min_distance(eps);
        if d0 < min_d || de < min_d {
            return Err(EvalError::ContinuationFailure(
                "path passes within 0.1|eps| of a singular point".into(),
            ));
        }
    }
    Ok(())
}

/// Right-hand side of the first-order system for (w, w′):
/// w″ = −({1−ε+(a+b+1)x} w′ + ab w) / (x(x−ε)).
fn linear_rhs<T: Real>(p: &Params<T>, x: Complex<T>, y: &[Complex<T>; 2]) -> [Complex<T>; 2] {
    let one = Complex::new(T::one(), T::zero());
    let eps = p.eps.value();
    let q = x * (x - eps);
    let lin = (one - eps + (p.a + p.b + one) * x) * y[1] + p.a * p.b * y[0];
    [y[1], -lin / q]
}

/// Transport (w, w′) along `segments` with local tolerance `tol`.
pub fn transport_linear<T: Real>(
    p: &Params<T>,
    segments: &[PathSegment<T>],
    initial: [Complex<T>; 2],
    tol: T,
) -> Result<TransportResult<T, 2>> {
    check_clearance(p, segments)?;
    let mut state = initial;
    let mut global = T::zero();
    let mut steps = 0usize;
    for seg in segments {
        let f = |s: T, y: &[Complex<T>; 2]| {
            let x = seg.point(s);
            let v = seg.velocity(s);
            let d = linear_rhs(p, x, y);
            [d[0] * v, d[1] * v]
        };
        let (y, g, n) = integrate(&f, state, tol)?;
        state = y;
        global = global + g;
        steps += n;
    }
    Ok(TransportResult {
        state,
        error_estimate: global,
        steps,
    })
}

/// Ordered basis pair (first, second) of B^±.
fn basis_pair(sector: Sector) -> (Solution, Solution) {
    match sector {
        Sector::SPlus => (Solution::W2, Solution::W3),
        Sector::SMinus => (Solution::W4, Solution::W1),
    }
}

/// Monodromy of the mixed basis B^{sector} around `center` (0 or ε), measured
/// by ODE transport: seed the two basis solutions at a base point on (0, ε),
/// transport around the positive loop, and solve for the matrix that
/// re-expresses the transported pair in the initial germs.
///
/// The loop hugs the singular point (radius 0.15|ε|, base on the loop): the
/// subdominant local exponent has size ~1/ε, so the weight of that solution
/// varies along a radius-r loop by ((|ε|+r)/(|ε|−r))^{~1/ε}; a wide loop at
/// radius |ε|/2 amplifies local integration errors by ~3^{1/ε}, a hugging one
/// only by ~1.4^{1/ε}. The matrix itself does not depend on the base point,
/// since all germs are read in the same global basis.
pub fn monodromy_via_integration<T: Real>(
    p: &Params<T>,
    sector: Sector,
    center: Complex<T>,
    tol: T,
) -> Result<Mat2<T>> {
    let eps = p.eps.value();
    let around_zero = center.norm() < (center - eps).norm();
    // Base point choice trades two conditioning constraints against each
    // other: the ramified germ κ·u^{1/ε}v^{β}(…) must be comparable to or
    // larger than the tame one (else its coefficient in the transported tame
    // row drowns in roundoff), while the loop must not sweep regions where
    // the ramified weight varies by many orders. Empirically u ≈ 0.65 for
    // loops around 0 and u ≈ 0.3 for loops around ε sit in the flat window
    // of both constraints across the working |ε| range.
    let u_mod = if around_zero { T::of(0.65) } else { T::of(0.3) };
    let (r1, r2) = monodromy_row(p, sector, center, u_mod, 0, tol)?;
    let (r3, r4) = monodromy_row(p, sector, center, u_mod, 1, tol)?;
    Ok(Mat2::new(r1, r2, r3, r4, sector, eps.scale(u_mod), center))
}

/// One row of the monodromy matrix: seed basis row `row_idx` at the base
/// point x₀ = u_mod·ε, transport around the circle through x₀ centered at
/// `center`, and express the result in the germs at x₀.
fn monodromy_row<T: Real>(
    p: &Params<T>,
    sector: Sector,
    center: Complex<T>,
    u_mod: T,
    row_idx: usize,
    tol: T,
) -> Result<(Complex<T>, Complex<T>)> {
    let eps = p.eps.value();
    let base = eps.scale(u_mod);
    let spec = PathSpec {
        base,
        center,
        turn: T::of(2.0) * T::PI(),
    };
    let segments = spec.segments();
    let (first, second) = basis_pair(sector);
    let at = LensPoint {
        u: BranchedPoint::new(u_mod, T::zero()),
        v: BranchedPoint::new(T::one() - u_mod, T::zero()),
    };
    let k = kappa(p, sector);
    let (w_a, dw_a) = basis_value_and_deriv(p, first, &at)?;
    let (w_b, dw_b) = basis_value_and_deriv(p, second, &at)?;
    // The ODE in x does not see the 1/ε chain rule, so the states are plain
    // (w, dw/dx) rows; the first element carries its κ factor.
    let rows = [[k * w_a, k * dw_a], [w_b, dw_b]];
    let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    let scale = (rows[0][0].norm() + rows[0][1].norm()) * (rows[1][0].norm() + rows[1][1].norm());
    if det.norm() < T::of(1e-12) * scale {
        return Err(EvalError::IllConditionedBasis(
            (det.norm() / scale).to_f64().unwrap_or(0.0),
        ));
    }
    let f = transport_linear(p, &segments, rows[row_idx], tol)?.state;
    // Solve (m_i1, m_i2) from F_i = m_i1·S_1 + m_i2·S_2.
    let m1 = (f[0] * rows[1][1] - f[1] * rows[1][0]) / det;
    let m2 = (f[1] * rows[0][0] - f[0] * rows[0][1]) / det;
    Ok((m1, m2))
}

/// Riccati vector field ẋ = x(x−ε), ẏ = ab·x(x−ε) + (−1+(1−a−b)x) y + y².
pub fn riccati_rhs<T: Real>(p: &Params<T>, x: Complex<T>, y: Complex<T>) -> (Complex<T>, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    let eps = p.eps.value();
    let q = x * (x - eps);
    let lin = -one + (one - p.a - p.b) * x;
    (q, p.a * p.b * q + lin * y + y * y)
}

/// Riccati transport outcome: final (x, y), error estimate, and the number of
/// chart switches performed because |y| crossed the chart bound.
#[derive(Debug, Clone, Copy)]
pub struct RiccatiResult<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
    pub error_estimate: T,
    pub chart_switches: usize,
}

/// Chart bound for the Riccati variable; beyond it we integrate 1/y.
pub const CHART_BOUND: f64 = 1e6;

/// Flow the Riccati system for complex time `t_end` (straight segment in
/// time) starting at (x0, y0). Poles of y are crossed in the 1/y chart and
/// counted, not fatal.
pub fn transport_riccati_time<T: Real>(
    p: &Params<T>,
    initial: (Complex<T>, Complex<T>),
    t_end: Complex<T>,
    tol: T,
) -> Result<RiccatiResult<T>> {
    let bound = T::of(CHART_BOUND);
    let mut x = initial.0;
    let mut y = initial.1;
    let mut inverted = y.norm() > bound;
    let mut z = if inverted { y.inv() } else { y };
    let mut done = T::zero(); // fraction of t_end completed
    let mut global = T::zero();
    let mut switches = 0usize;
    for _attempt in 0..64 {
        let start = done;
        let seg_state = [x, z];
        let inv_now = inverted;
        let f = move |_s: T, st: &[Complex<T>; 2]| {
            let (dx, dy_of) = (st[0], st[1]);
            let yv = if inv_now { dy_of.inv() } else { dy_of };
            let (fx, fy) = riccati_rhs(p, dx, yv);
            let dz = if inv_now { -fy * dy_of * dy_of } else { fy };
            [fx * t_end.scale(T::one() - start), dz * t_end.scale(T::one() - start)]
        };
        // Hysteresis: enter the 1/y chart at |y| > 1e6, leave at |y| < 1e3.
        let out = integrate_until(&f, seg_state, tol, |st| {
            let m = st[1].norm();
            if inv_now {
                m > T::of(1e-3)
            } else {
                m > bound
            }
        });
        match out {
            Ok((st, g, _n, s_reached)) => {
                global = global + g;
                x = st[0];
                z = st[1];
                done = start + (T::one() - start) * s_reached;
                if s_reached >= T::one() {
                    let y_final = if inverted { z.inv() } else { z };
                    return Ok(RiccatiResult {
                        x,
                        y: y_final,
                        error_estimate: global,
                        chart_switches: switches,
                    });
                }
                // Switch chart and continue.
                z = z.inv();
                inverted = !inverted;
                switches += 1;
                y = if inverted { z.inv() } else { z };
                let _ = y;
            }
            Err(e) => return Err(e),
        }
    }
    Err(EvalError::BlowUp)
}

/// Like `integrate`, but stops early when `stop` first holds after an
/// accepted step, returning the s-coordinate actually reached.
fn integrate_until<T: Real, const N: usize, F, S>(
    f: &F,
    y0: [Complex<T>; N],
    tol: T,
    stop: S,
) -> Result<([Complex<T>; N], T, usize, T)>
where
    F: Fn(T, &[Complex<T>; N]) -> [Complex<T>; N],
    S: Fn(&[Complex<T>; N]) -> bool,
{
    let mut s = T::zero();
    let mut y = y0;
    let mut h = T::of(0.01);
    let mut global = T::zero();
    let mut steps = 0usize;
    let h_min = T::of(1e-13);
    while s < T::one() {
        if h > T::one() - s {
            h = T::one() - s;
        }
        let (y_new, err) = rkf_step(f, s, h, &y);
        // Same ‖y‖∞-relative error control as `integrate`.
        let mut ymax = T::zero();
        for n in 0..N {
            ymax = ymax.max(y[n].norm());
        }
        let scale = if ymax > T::zero() { tol * ymax } else { tol };
        let mut ratio = T::zero();
        for n in 0..N {
            ratio = ratio.max(err[n].norm() / scale);
        }
        if ratio <= T::one() {
            s = s + h;
            y = y_new;
            let mut e = T::zero();
            for n in 0..N {
                e = e.max(err[n].norm());
            }
            global = global + e;
            steps += 1;
            if stop(&y) {
                return Ok((y, global, steps, s));
            }
            if steps > 2_000_000 {
                return Err(EvalError::StepUnderflow);
            }
        }
        let factor = if ratio > T::zero() {
            (T::of(0.9) * ratio.powf(T::of(-0.125))).max(T::of(0.2)).min(T::of(5.0))
        } else {
            T::of(5.0)
        };
        h = h * factor;
        if h < h_min && s < T::one() {
            return Err(EvalError::StepUnderflow);
        }
    }
    Ok((y, global, steps, s))
}

/// Transport y(x) along a path in x (dy/dx = ẏ/ẋ), with the same 1/y chart
/// switching as the time flow.
pub fn transport_riccati_x<T: Real>(
    p: &Params<T>,
    segments: &[PathSegment<T>],
    y0: Complex<T>,
    tol: T,
) -> Result<RiccatiResult<T>> {
    let bound = T::of(CHART_BOUND);
    let mut global = T::zero();
    let mut switches = 0usize;
    let mut y = y0;
    let mut x_last = match segments.first() {
        Some(seg) => seg.point(T::zero()),
        None => {
            return Ok(RiccatiResult {
                x: Complex::new(T::zero(), T::zero()),
                y: y0,
                error_estimate: T::zero(),
                chart_switches: 0,
            })
        }
    };
    for seg in segments {
        let mut s0 = T::zero();
        let mut inverted = y.norm() > bound;
        let mut z = if inverted { y.inv() } else { y };
        for _attempt in 0..64 {
            let inv_now = inverted;
            let base = s0;
            let f = move |s: T, st: &[Complex<T>; 1]| {
                let sp = base + (T::one() - base) * s;
                let x = seg.point(sp);
                let v = seg.velocity(sp).scale(T::one() - base);
                let yv = if inv_now { st[0].inv() } else { st[0] };
                let (fx, fy) = riccati_rhs(p, x, yv);
                let dydx = fy / fx;
                let dz = if inv_now { -dydx * st[0] * st[0] } else { dydx };
                [dz * v]
            };
            let (st, g, _n, s_reached) = integrate_until(&f, [z], tol, |st| {
                let m = st[0].norm();
                if inv_now {
                    m > T::of(1e-3)
                } else {
                    m > bound
                }
            })?;
            global = global + g;
            z = st[0];
            s0 = base + (T::one() - base) * s_reached;
            if s_reached >= T::one() {
                break;
            }
            z = z.inv();
            inverted = !inverted;
            switches += 1;
        }
        y = if inverted { z.inv() } else { z };
        x_last = seg.point(T::one());
    }
    Ok(RiccatiResult {
        x: x_last,
        y,
        error_estimate: global,
        chart_switches: switches,
    })
}
