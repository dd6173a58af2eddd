//! Subcommand drivers: the ε-scan of Stokes data, the verification suites,
//! and the plot-data emitters. All output is assembled in memory first and
//! written once, so row order is deterministic.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};
use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use hypconf::borel::{h0_eval, H0Side};
use hypconf::path::transport_riccati_time;
use hypconf::riccati::rho_eval;
use hypconf::sectors::{h_eps, sector_classify, SectorConfig};
use hypconf::stokes::{product_l, stokes_limits, unfolded_multipliers};
use hypconf::{BranchedPoint, Params, Sector, Solution, C64};

use crate::config::{
    parse_branched, parse_eps_grid, Cli, Command, CommonArgs, Format, ParamPoly, PlotKind,
    SectorChoice,
};
use crate::verify;

/// Radius of the ε-disk accepted by the scans. The sector geometry only
/// constrains the opening; the radius here is a practical bound keeping the
/// unfolded series well inside their convergence regions.
pub const SECTOR_RADIUS: f64 = 0.2;

#[derive(Serialize, Clone, Copy)]
pub struct CxJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for CxJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize, Clone, Copy)]
pub struct BranchedJson {
    pub modulus: f64,
    pub argument: f64,
}

impl From<&BranchedPoint<f64>> for BranchedJson {
    fn from(b: &BranchedPoint<f64>) -> Self {
        Self {
            modulus: b.modulus(),
            argument: b.argument(),
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, String> {
    match cli.cmd {
        Command::Stokes(common) => {
            let text = cmd_stokes(&common)?;
            emit(&common, &text)?;
            Ok(0)
        }
        Command::Verify { suite, common } => {
            let (text, all_pass) = verify::cmd_verify(suite, &common)?;
            emit(&common, &text)?;
            Ok(if all_pass { 0 } else { 2 })
        }
        Command::Plotdata { kind, common } => {
            let text = cmd_plotdata(kind, &common)?;
            emit(&common, &text)?;
            Ok(0)
        }
    }
}

fn emit(common: &CommonArgs, text: &str) -> Result<(), String> {
    match &common.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
    }
}

/// Shared scan configuration resolved from the flags.
pub struct ResolvedScan {
    pub a: ParamPoly,
    pub b: ParamPoly,
    pub grid: Vec<BranchedPoint<f64>>,
    pub sector_cfg: SectorConfig<f64>,
    pub choice: SectorChoice,
}

pub fn resolve_scan(common: &CommonArgs, default_grid: &str) -> Result<ResolvedScan, String> {
    let a = ParamPoly::parse(&common.a)?;
    let b = ParamPoly::parse(&common.b)?;
    let grid = match &common.eps_grid {
        Some(s) => parse_eps_grid(s)?,
        None => parse_eps_grid(default_grid)?,
    };
    let sector_cfg = SectorConfig::with_radius(common.gamma, SECTOR_RADIUS)
        .map_err(|e| format!("invalid sector geometry: {e}"))?;
    Ok(ResolvedScan {
        a,
        b,
        grid,
        sector_cfg,
        choice: common.sector,
    })
}

/// Sector of one grid point under the requested selection policy.
pub fn resolve_sector(
    scan: &ResolvedScan,
    eps: &BranchedPoint<f64>,
) -> Result<Sector, String> {
    let set = sector_classify(eps, &scan.sector_cfg).map_err(|e| {
        format!(
            "grid point modulus {} argument {} rejected: {e}",
            eps.modulus(),
            eps.argument()
        )
    })?;
    match scan.choice {
        SectorChoice::Plus if set.plus => Ok(Sector::SPlus),
        SectorChoice::Minus if set.minus => Ok(Sector::SMinus),
        SectorChoice::Auto if set.plus => Ok(Sector::SPlus),
        SectorChoice::Auto if set.minus => Ok(Sector::SMinus),
        _ => Err(format!(
            "grid point modulus {} argument {} does not lie in the requested sector",
            eps.modulus(),
            eps.argument()
        )),
    }
}

fn sector_label(s: Sector) -> &'static str {
    match s {
        Sector::SPlus => "+",
        Sector::SMinus => "-",
    }
}

#[derive(Serialize)]
struct StokesRow {
    eps: BranchedJson,
    sector: String,
    lambda: CxJson,
    mu: CxJson,
    l: CxJson,
    lambda_err: f64,
    mu_err: f64,
}

struct StokesData {
    eps: BranchedJson,
    sector: Sector,
    lambda: C64,
    mu: C64,
    l: C64,
    lambda_err: f64,
    mu_err: f64,
}

fn stokes_row(scan: &ResolvedScan, eps: &BranchedPoint<f64>) -> Result<StokesData, String> {
    let sector = resolve_sector(scan, eps)?;
    let ev = eps.value();
    let a = scan.a.eval(ev);
    let b = scan.b.eval(ev);
    let p = Params::new(a, b, eps.clone());
    let s = unfolded_multipliers(&p, sector);
    let l = product_l(&p, sector);
    let lim = stokes_limits(a, b);
    Ok(StokesData {
        eps: eps.into(),
        sector,
        lambda: s.lambda,
        mu: s.mu,
        l,
        lambda_err: (s.lambda - lim.lambda).norm(),
        mu_err: (s.mu - lim.mu).norm(),
    })
}

fn cmd_stokes(common: &CommonArgs) -> Result<String, String> {
    let scan = resolve_scan(common, "log:1e-1:1e-3:9:0.7853981633974483")?;
    let mut rows = Vec::new();
    for eps in &scan.grid {
        rows.push(stokes_row(&scan, eps)?);
    }
    match common.format {
        Format::Csv => {
            let mut out = String::from(
                "eps_modulus,eps_argument,sector,lambda_re,lambda_im,mu_re,mu_im,l_re,l_im,lambda_err,mu_err\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "{:e},{:e},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                    r.eps.modulus,
                    r.eps.argument,
                    sector_label(r.sector),
                    r.lambda.re,
                    r.lambda.im,
                    r.mu.re,
                    r.mu.im,
                    r.l.re,
                    r.l.im,
                    r.lambda_err,
                    r.mu_err
                ));
            }
            Ok(out)
        }
        Format::Json => {
            let json_rows: Vec<StokesRow> = rows
                .into_iter()
                .map(|r| StokesRow {
                    eps: r.eps,
                    sector: sector_label(r.sector).to_string(),
                    lambda: r.lambda.into(),
                    mu: r.mu.into(),
                    l: r.l.into(),
                    lambda_err: r.lambda_err,
                    mu_err: r.mu_err,
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json_rows)
                .map_err(|e| format!("serialization failure: {e}"))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn cmd_plotdata(kind: PlotKind, common: &CommonArgs) -> Result<String, String> {
    match kind {
        PlotKind::HLimitScan => plot_h_limit(common),
        PlotKind::StokesLimitScan => plot_stokes_limit(common),
        PlotKind::RiccatiPortrait => plot_riccati_portrait(common),
    }
}

/// |H^{ε}(x) − H⁰(x)| at fixed base points x as ε shrinks toward 0 inside
/// the sector; the column should decrease along the default grid.
fn plot_h_limit(common: &CommonArgs) -> Result<String, String> {
    let scan = resolve_scan(
        common,
        "1e-2:0.7853981633974483,5e-3:0.7853981633974483,2.5e-3:0.7853981633974483,\
         1.25e-3:0.7853981633974483,6.25e-4:0.7853981633974483",
    )?;
    let xs = [
        BranchedPoint::new(0.2, FRAC_PI_4),
        BranchedPoint::new(0.25, FRAC_PI_6),
        BranchedPoint::new(0.15, -FRAC_PI_4),
    ];
    let mut out = String::from(
        "x_re,x_im,eps_modulus,eps_argument,h_eps_re,h_eps_im,h0_re,h0_im,abs_diff\n",
    );
    for x in &xs {
        for eps in &scan.grid {
            let sector = resolve_sector(&scan, eps)?;
            let side = match sector {
                Sector::SPlus => H0Side::Primary,
                Sector::SMinus => H0Side::Primed,
            };
            let ev = eps.value();
            let a = scan.a.eval(ev);
            let b = scan.b.eval(ev);
            let p = Params::new(a, b, eps.clone());
            let h = h_eps(&p, sector, x).map_err(|e| format!("H^eps evaluation failed: {e}"))?;
            let h0 =
                h0_eval(a, b, x, side).map_err(|e| format!("H^0 evaluation failed: {e}"))?;
            let hv = if h.reciprocal { h.value.inv() } else { h.value };
            let h0v = if h0.reciprocal { h0.value.inv() } else { h0.value };
            let xv = x.value();
            out.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                xv.re,
                xv.im,
                eps.modulus(),
                eps.argument(),
                hv.re,
                hv.im,
                h0v.re,
                h0v.im,
                (hv - h0v).norm()
            ));
        }
    }
    Ok(out)
}

/// Distance of the unfolded Stokes multipliers to their ε → 0 limits along
/// a shrinking grid.
fn plot_stokes_limit(common: &CommonArgs) -> Result<String, String> {
    let scan = resolve_scan(common, "log:1e-1:1e-4:13:0.7853981633974483")?;
    let mut out = String::from(
        "eps_modulus,eps_argument,sector,lambda_re,lambda_im,mu_re,mu_im,lambda_err,mu_err\n",
    );
    for eps in &scan.grid {
        let r = stokes_row(&scan, eps)?;
        out.push_str(&format!(
            "{:e},{:e},{},{:e},{:e},{:e},{:e},{:e},{:e}\n",
            r.eps.modulus,
            r.eps.argument,
            sector_label(r.sector),
            r.lambda.re,
            r.lambda.im,
            r.mu.re,
            r.mu.im,
            r.lambda_err,
            r.mu_err
        ));
    }
    Ok(out)
}

/// Phase-portrait data of the Riccati system ẋ = x(x−ε),
/// ẏ = ab·x(x−ε) + (−1+(1−a−b)x)y + y²: polylines of integrated
/// trajectories and samples of the invariant graphs y = ρ₂(x) and y = ρ₃(x).
fn plot_riccati_portrait(common: &CommonArgs) -> Result<String, String> {
    let eps = match &common.eps {
        Some(s) => parse_branched(s)?,
        None => BranchedPoint::new(0.1, 0.0),
    };
    let ev = eps.value();
    let a = ParamPoly::parse(&common.a)?.eval(ev);
    let b = ParamPoly::parse(&common.b)?.eval(ev);
    let p = Params::new(a, b, eps.clone());
    let mut out = String::from("series,point_index,x_re,x_im,y_re,y_im\n");
    let push = |out: &mut String, series: &str, idx: usize, x: C64, y: C64| {
        out.push_str(&format!(
            "{},{},{:e},{:e},{:e},{:e}\n",
            series, idx, x.re, x.im, y.re, y.im
        ));
    };

    // Invariant graphs: ρ₂ is anchored at (0, 1), ρ₃ at (ε, 0).
    let samples = 24usize;
    push(&mut out, "rho2", 0, C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    for i in 0..samples {
        let s = 0.04 + 0.92 * i as f64 / (samples - 1) as f64;
        let x = BranchedPoint::new(s * eps.modulus(), eps.argument());
        let r = rho_eval(&p, Solution::W2, &x)
            .map_err(|e| format!("rho2 sample failed: {e}"))?;
        let y = if r.reciprocal { r.value.inv() } else { r.value };
        push(&mut out, "rho2", i + 1, x.value(), y);
    }
    for i in 0..samples {
        let s = 0.04 + 0.92 * i as f64 / (samples - 1) as f64;
        let x = BranchedPoint::new(s * eps.modulus(), eps.argument());
        let r = rho_eval(&p, Solution::W3, &x)
            .map_err(|e| format!("rho3 sample failed: {e}"))?;
        let y = if r.reciprocal { r.value.inv() } else { r.value };
        push(&mut out, "rho3", i, x.value(), y);
    }
    push(&mut out, "rho3", samples, ev, C64::new(0.0, 0.0));

    // Integrated trajectories from a few seeds between the singular points.
    let seeds = [
        C64::new(0.25, 0.0),
        C64::new(0.6, 0.0),
        C64::new(1.3, 0.0),
        C64::new(-0.4, 0.0),
    ];
    let steps = 30usize;
    let dt = Complex::new(2.0, 0.0);
    for (k, y0) in seeds.iter().enumerate() {
        let series = format!("trajectory{k}");
        let mut x = ev * 0.5;
        let mut y = *y0;
        push(&mut out, &series, 0, x, y);
        for i in 1..=steps {
            match transport_riccati_time(&p, (x, y), dt, 1e-10) {
                Ok(r) => {
                    x = r.x;
                    y = r.y;
                    if y.norm() > 1e3 {
                        break;
                    }
                    push(&mut out, &series, i, x, y);
                }
                Err(_) => break,
            }
        }
    }
    Ok(out)
}
