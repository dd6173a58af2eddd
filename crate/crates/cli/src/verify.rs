//! Verification suites: each runs a fixed list of cross-module identities on
//! deterministically seeded samples and reports one residual per identity.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::Serialize;

use hypconf::borel::{g_closed_form, laplace_sum, LateralTag};
use hypconf::path::{monodromy_via_integration, transport_riccati_time};
use hypconf::riccati::{
    first_integral_continued, first_integral_eval, l_universal, riccati_field, rho_eval,
    singular_points, sqrt_branches, UniversalParams,
};
use hypconf::sectors::{basis_eval, lemma_symmetry};
use hypconf::stokes::{monodromy_matrix, unfolded_multipliers, Around, Mat2};
use hypconf::{BranchedPoint, Params, Sector, Solution, C64};

use crate::config::{CommonArgs, Suite};
use crate::rng::SplitMix64;

#[derive(Serialize)]
struct Check {
    identity: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<String>,
}

#[derive(Serialize)]
struct Report {
    suite: String,
    seed: u64,
    all_pass: bool,
    checks: Vec<Check>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, identity: impl Into<String>, residual: f64, tolerance: f64) {
        self.push_branch(identity, residual, tolerance, None);
    }

    fn push_branch(
        &mut self,
        identity: impl Into<String>,
        residual: f64,
        tolerance: f64,
        branch: Option<String>,
    ) {
        self.0.push(Check {
            identity: identity.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            branch,
        });
    }

    fn fail(&mut self, identity: impl Into<String>, tolerance: f64, why: &str) {
        self.0.push(Check {
            identity: format!("{} [{why}]", identity.into()),
            residual: f64::INFINITY,
            tolerance,
            pass: false,
            branch: None,
        });
    }
}

pub fn cmd_verify(suite: Suite, common: &CommonArgs) -> Result<(String, bool), String> {
    let mut rng = SplitMix64::new(common.seed);
    let mut checks = Checks(Vec::new());
    let (name, gamma) = match suite {
        Suite::Monodromy => ("monodromy", common.gamma),
        Suite::Borel => ("borel", common.gamma),
        Suite::Riccati => ("riccati", common.gamma),
        Suite::Symmetry => ("symmetry", common.gamma),
        Suite::Universal => ("universal", common.gamma),
    };
    match suite {
        Suite::Monodromy => suite_monodromy(&mut rng, &mut checks),
        Suite::Borel => suite_borel(&mut rng, &mut checks),
        Suite::Riccati => suite_riccati(&mut rng, &mut checks),
        Suite::Symmetry => suite_symmetry(&mut rng, &mut checks),
        Suite::Universal => suite_universal(&mut rng, gamma, &mut checks),
    }
    let all_pass = checks.0.iter().all(|c| c.pass);
    let report = Report {
        suite: name.to_string(),
        seed: common.seed,
        all_pass,
        checks: checks.0,
    };
    let mut s = serde_json::to_string_pretty(&report)
        .map_err(|e| format!("serialization failure: {e}"))?;
    s.push('\n');
    Ok((s, all_pass))
}

fn random_params(rng: &mut SplitMix64, arg_lo: f64, arg_hi: f64) -> Params<f64> {
    let a = C64::new(rng.range(0.15, 0.85), rng.range(-0.2, 0.2));
    let b = C64::new(rng.range(1.1, 1.8), rng.range(-0.2, 0.2));
    let eps = BranchedPoint::new(rng.range(0.05, 0.09), rng.range(arg_lo, arg_hi));
    Params::new(a, b, eps)
}

fn max_norm(m: &Mat2<f64>) -> f64 {
    m.m11
        .norm()
        .max(m.m12.norm())
        .max(m.m21.norm())
        .max(m.m22.norm())
}

fn rel(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / (lhs.norm() + rhs.norm())
}

/// Analytic monodromy matrices against loop-integrated ones, both loops,
/// both sectors.
fn suite_monodromy(rng: &mut SplitMix64, checks: &mut Checks) {
    for sector in [Sector::SPlus, Sector::SMinus] {
        let (sign, tag) = match sector {
            Sector::SPlus => (1.0, "S+"),
            Sector::SMinus => (-1.0, "S-"),
        };
        let a = C64::new(rng.range(0.15, 0.85), rng.range(-0.2, 0.2));
        let b = C64::new(rng.range(1.1, 1.8), rng.range(-0.2, 0.2));
        // Sample 1/ε directly: a bounded imaginary part keeps the wild
        // factor e^{2πi/ε} small enough for the loop transport to resolve
        // the comparison at 1e-6, and the offset from integers keeps the
        // analytic entries away from their resonance poles.
        let n = 11 + (rng.next_u64() % 5) as i64;
        let w = C64::new(sign * (n as f64 + rng.range(0.25, 0.75)), rng.range(-0.8, 0.8));
        let ev = w.inv();
        // Lift the argument into the sector's fundamental window:
        // (−π+γ, π−γ) for S⁺ and (γ, 2π−γ) for S⁻.
        let mut arg = ev.im.atan2(ev.re);
        if sector == Sector::SMinus && arg <= 0.0 {
            arg += 2.0 * PI;
        }
        let eps = BranchedPoint::new(ev.norm(), arg);
        let p = Params::new(a, b, eps);
        for around in [Around::Zero, Around::Eps] {
            let (center, ctag) = match around {
                Around::Zero => (C64::new(0.0, 0.0), "0"),
                Around::Eps => (p.eps.value(), "eps"),
            };
            let id = format!("monodromy_analytic_vs_integrated_{tag}_around_{ctag}");
            let analytic = monodromy_matrix(&p, sector, around);
            match monodromy_via_integration(&p, sector, center, 1e-13) {
                Ok(numeric) => {
                    let diff = Mat2::new(
                        analytic.m11 - numeric.m11,
                        analytic.m12 - numeric.m12,
                        analytic.m21 - numeric.m21,
                        analytic.m22 - numeric.m22,
                        sector,
                        center,
                        center,
                    );
                    checks.push(id, max_norm(&diff) / max_norm(&analytic), 1e-6);
                }
                Err(e) => checks.fail(id, 1e-6, &e.to_string()),
            }
        }
    }
}

/// Borel-sum double route, the Euler-series oracle, and the convergent case
/// a ∈ −ℕ where the lateral sums coincide (λ = 0).
fn suite_borel(rng: &mut SplitMix64, checks: &mut Checks) {
    for i in 0..5 {
        let a = C64::new(rng.range(0.1, 0.45), rng.range(-0.2, 0.2));
        let b = C64::new(rng.range(0.55, 0.95), rng.range(-0.2, 0.2));
        let x = BranchedPoint::new(rng.range(0.08, 0.3), rng.range(-1.2, 1.2));
        let id = format!("g_closed_form_vs_laplace_{i}");
        match (
            g_closed_form(a, b, &x, LateralTag::None),
            laplace_sum(a, b, &x, 0.0),
        ) {
            (Ok(c), Ok(l)) => checks.push(id, rel(c.value, l.value), 1e-8),
            (Err(e), _) | (_, Err(e)) => checks.fail(id, 1e-8, &e.to_string()),
        }
    }

    let one = C64::new(1.0, 0.0);
    let x = BranchedPoint::new(0.1, 0.0);
    match laplace_sum(one, one, &x, 0.0) {
        Ok(g) => checks.push(
            "euler_series_sum_at_0.1",
            (g.value - C64::new(0.915633, 0.0)).norm(),
            1e-5,
        ),
        Err(e) => checks.fail("euler_series_sum_at_0.1", 1e-5, &e.to_string()),
    }

    // a = −1: the series terminates, the Stokes multiplier λ vanishes, and
    // the two lateral sums across the singular direction agree.
    let a = C64::new(-1.0, 0.0);
    let b = C64::new(0.4, 0.0);
    let x = BranchedPoint::new(0.25, PI);
    let id = "g_lateral_jump_convergent_a_minus_1";
    match (
        g_closed_form(a, b, &x, LateralTag::Plus),
        g_closed_form(a, b, &x, LateralTag::Minus),
    ) {
        (Ok(gp), Ok(gm)) => checks.push_branch(
            id,
            (gp.value - gm.value).norm() / (1.0 + gm.value.norm()),
            1e-10,
            Some("lambda-zero".to_string()),
        ),
        (Err(e), _) | (_, Err(e)) => checks.fail(id, 1e-10, &e.to_string()),
    }
}

fn value_of(r: &hypconf::sectors::EvalResult<f64>) -> C64 {
    if r.reciprocal {
        r.value.inv()
    } else {
        r.value
    }
}

/// First-integral conservation, eigen-quotients at the singular points, the
/// graph anchors of ρ₂ and ρ₃, and the wild/continuous monodromy split of
/// the first integral.
fn suite_riccati(rng: &mut SplitMix64, checks: &mut Checks) {
    let a = C64::new(0.3, 0.0);
    let b = C64::new(0.7, 0.0);
    let eps = BranchedPoint::new(0.0493, 0.0);
    let p = Params::new(a, b, eps.clone());
    let ev = eps.value();

    // Conservation of I^{ε+} along an integrated trajectory.
    let x0 = ev * 0.4;
    let y0 = C64::new(rng.range(0.2, 0.5), rng.range(-0.2, 0.2));
    let id = "first_integral_conserved_along_flow";
    let before = first_integral_eval(&p, Sector::SPlus, &BranchedPoint::from_value(x0), y0);
    let after = transport_riccati_time(&p, (x0, y0), C64::new(0.4, 0.0), 1e-12).and_then(|r| {
        first_integral_eval(&p, Sector::SPlus, &BranchedPoint::from_value(r.x), r.y)
    });
    match (before, after) {
        (Ok(i0), Ok(i1)) => checks.push(id, rel(value_of(&i0), value_of(&i1)), 1e-8),
        (Err(e), _) | (_, Err(e)) => checks.fail(id, 1e-8, &e.to_string()),
    }

    // Eigen-quotients against central differences (exact for this quadratic
    // field up to roundoff).
    let mut worst: f64 = 0.0;
    let h = 1e-5;
    for info in singular_points(&p) {
        let (x, y) = info.location;
        let fx = |dx: f64| riccati_field(&p, (x + C64::new(dx, 0.0), y)).0;
        let fy = |dy: f64| riccati_field(&p, (x, y + C64::new(dy, 0.0))).1;
        let dxdot = (fx(h) - fx(-h)) / C64::new(2.0 * h, 0.0);
        let dydot = (fy(h) - fy(-h)) / C64::new(2.0 * h, 0.0);
        worst = worst.max((dydot / dxdot - info.eigen_quotient).norm());
    }
    checks.push("eigen_quotients_vs_finite_difference", worst, 1e-10);

    // Anchors of the invariant graphs.
    match rho_eval(&p, Solution::W2, &BranchedPoint::new(1e-13 * 0.0493, 0.0)) {
        Ok(r) => checks.push(
            "rho2_anchored_at_origin",
            (value_of(&r) - C64::new(1.0, 0.0)).norm(),
            1e-12,
        ),
        Err(e) => checks.fail("rho2_anchored_at_origin", 1e-12, &e.to_string()),
    }
    match rho_eval(&p, Solution::W3, &BranchedPoint::new(0.0493 * (1.0 - 1e-13), 0.0)) {
        Ok(r) => checks.push("rho3_anchored_at_eps", value_of(&r).norm(), 1e-12),
        Err(e) => checks.fail("rho3_anchored_at_eps", 1e-12, &e.to_string()),
    }

    // Wild/continuous split of the first-integral monodromy:
    //   around ε:  I_{(ε,−π)} = e^{2πi(a+b−1+1/ε)} (I_{(ε,π)} − μ⁺)
    //   around 0:  1/I_{(0,π)} = e^{−2πi/ε} (1/I_{(0,−π)} + λ⁺)
    let s = unfolded_multipliers(&p, Sector::SPlus);
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    let one = C64::new(1.0, 0.0);
    let y = C64::new(rng.range(0.3, 0.45), rng.range(0.1, 0.3));
    let t = 0.5;

    let id = "first_integral_monodromy_around_eps";
    let wild_e = Complex::exp(two_pi_i * (p.a + p.b - one + p.inv_eps()));
    match (
        first_integral_continued(&p, Sector::SPlus, Around::Eps, PI, t, y),
        first_integral_continued(&p, Sector::SPlus, Around::Eps, -PI, t, y),
    ) {
        (Ok(ip), Ok(im)) => checks.push(id, rel(im.value, wild_e * (ip.value - s.mu)), 1e-7),
        (Err(e), _) | (_, Err(e)) => checks.fail(id, 1e-7, &e.to_string()),
    }

    let id = "first_integral_monodromy_around_zero";
    let wild_0 = Complex::exp(-two_pi_i * p.inv_eps());
    match (
        first_integral_continued(&p, Sector::SPlus, Around::Zero, PI, t, y),
        first_integral_continued(&p, Sector::SPlus, Around::Zero, -PI, t, y),
    ) {
        (Ok(ip), Ok(im)) => checks.push(
            id,
            rel(ip.value.inv(), wild_0 * (im.value.inv() + s.lambda)),
            1e-7,
        ),
        (Err(e), _) | (_, Err(e)) => checks.fail(id, 1e-7, &e.to_string()),
    }
}

/// The sector-swapping symmetry: it is an involution and exchanges the
/// bases w₃ ↔ w₁.
fn suite_symmetry(rng: &mut SplitMix64, checks: &mut Checks) {
    let p = random_params(rng, -0.4, 0.4);
    let x = BranchedPoint::new(0.4 * p.eps.modulus(), p.eps.argument());
    let id = "symmetry_is_an_involution";
    match lemma_symmetry(&p, &x).and_then(|(p2, x2)| {
        let back = lemma_symmetry(&p2, &x2)?;
        Ok((back.0, back.1))
    }) {
        Ok((p3, x3)) => {
            let r = (p3.eps.value() - p.eps.value()).norm() / p.eps.modulus()
                + (x3.value() - x.value()).norm() / x.modulus();
            checks.push(id, r, 1e-12);
        }
        Err(e) => checks.fail(id, 1e-12, &e.to_string()),
    }

    for i in 0..5 {
        let p = random_params(rng, -0.4, 0.4);
        let x = BranchedPoint::new(
            rng.range(0.25, 0.75) * p.eps.modulus(),
            p.eps.argument(),
        );
        let id = format!("w3_equals_w1_after_symmetry_{i}");
        let res = basis_eval(&p, Solution::W3, &x).and_then(|w3| {
            let (p2, x2) = lemma_symmetry(&p, &x)?;
            let w1 = basis_eval(&p2, Solution::W1, &x2)?;
            Ok(rel(w3.value, w1.value))
        });
        match res {
            Ok(r) => checks.push(id, r, 1e-9),
            Err(e) => checks.fail(id, 1e-9, &e.to_string()),
        }
    }
}

/// Analyticity of L(ε) = λ⁺(√ε)μ⁺(√ε) in ε: branch independence and the
/// closed form −(1−e^{−2πia})(1−e^{−2πib}).
fn suite_universal(rng: &mut SplitMix64, gamma: f64, checks: &mut Checks) {
    let one = C64::new(1.0, 0.0);
    let m2pi_i = C64::new(0.0, -2.0 * PI);
    for i in 0..4 {
        let a = C64::new(rng.range(0.15, 0.85), rng.range(-0.2, 0.2));
        let b = C64::new(rng.range(0.15, 0.85), rng.range(-0.2, 0.2));
        let eps = BranchedPoint::new(
            rng.range(0.005, 0.02),
            rng.range(gamma + 0.1, 4.0 * PI - gamma - 0.1),
        );
        let closed = -(one - Complex::exp(m2pi_i * a)) * (one - Complex::exp(m2pi_i * b));
        let (r1, r2) = sqrt_branches(&eps);
        for (j, root) in [r1, r2].into_iter().enumerate() {
            let p = Params::new(a, b, root);
            let s = unfolded_multipliers(&p, Sector::SPlus);
            checks.push_branch(
                format!("l_closed_form_sample_{i}"),
                (s.lambda * s.mu - closed).norm() / (1.0 + closed.norm()),
                1e-10,
                Some(format!("sqrt-branch-{}", j + 1)),
            );
        }
    }

    let half = C64::new(0.5, 0.0);
    let up = UniversalParams {
        a: half,
        b: half,
        eps: BranchedPoint::new(0.01, PI / 3.0),
    };
    match l_universal(&up) {
        Ok(l) => checks.push("l_at_a_b_half_is_minus_4", (l + C64::new(4.0, 0.0)).norm(), 1e-12),
        Err(e) => checks.fail("l_at_a_b_half_is_minus_4", 1e-12, &e.to_string()),
    }

    let up = UniversalParams {
        a: one,
        b: C64::new(0.3, 0.0),
        eps: BranchedPoint::new(0.01, PI / 3.0),
    };
    match l_universal(&up) {
        Ok(l) => checks.push("l_vanishes_for_integer_a", l.norm(), 1e-12),
        Err(e) => checks.fail("l_vanishes_for_integer_a", 1e-12, &e.to_string()),
    }
}
