//! Figure datasets with their parameter protocols fixed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use qtunnel::limits::{analytic_limit, LimitFormula};
use qtunnel::smooth::{
    large_asymmetry_at_mapped_sigma, perturbative_action, slope_mapped_sigma, SmoothBounce,
    SmoothParams,
};
use qtunnel::{Asymmetry, ModelParams};

use crate::error::{CliError, CliResult};
use crate::eval::{EvalOptions, Row};
use crate::format::g12;
use crate::output::{emit, metadata};
use crate::sweep::{evaluate_all, grid, run_in_pool, Scale};

pub const FIGURES: [&str; 10] = [
    "fig1b", "fig3b", "fig3c", "fig3d", "fig4b", "appC-K", "appD-a", "appD-b", "appE-b", "appE-d",
];

const B: f64 = 12.5;
const CUTOFF: f64 = 8000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub file: String,
    pub label: String,
    pub params: String,
    pub rows: Vec<Row>,
    pub prefactor: bool,
}

/// Plot hints: the CSV column on the y axis and the axis scales.
struct PlotHints {
    x_label: &'static str,
    y_col: usize,
    y_label: &'static str,
    log_x: bool,
    log_y: bool,
}

fn params(sigma: Asymmetry, g: f64, t: f64, wc: f64) -> CliResult<ModelParams> {
    Ok(ModelParams::new(B, sigma, g, t, wc)?)
}

fn sigma_label(s: Asymmetry) -> String {
    match s {
        Asymmetry::Finite(v) => g12(v),
        Asymmetry::Infinite => "inf".into(),
    }
}

/// Numerical curve over `xs` with parameters from `at`.
fn numeric(
    file: &str,
    label: String,
    desc: String,
    xs: &[f64],
    at: impl Fn(f64) -> CliResult<ModelParams>,
    opts: &EvalOptions,
    jobs: Option<usize>,
) -> CliResult<Curve> {
    let points = xs
        .iter()
        .map(|&x| Ok((x, at(x)?)))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Curve {
        file: file.into(),
        label,
        params: desc,
        rows: evaluate_all(&points, opts, jobs),
        prefactor: opts.prefactor,
    })
}

fn analytic(
    file: &str,
    label: &str,
    desc: String,
    xs: &[f64],
    at: impl Fn(f64) -> CliResult<ModelParams>,
    which: LimitFormula,
) -> CliResult<Curve> {
    let rows = xs
        .iter()
        .map(|&x| {
            let p = at(x)?;
            Ok(match analytic_limit(&p, which) {
                Ok(e) => Row {
                    xi_b: e.xi_b,
                    ..Row::analytic(x, e.enhancement)
                },
                Err(e) => Row {
                    x: Some(x),
                    error: e.to_string(),
                    ..Row::default()
                },
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Curve {
        file: file.into(),
        label: label.into(),
        params: desc,
        rows,
        prefactor: false,
    })
}

fn smooth_curve(r: f64, taus: &[f64], jobs: Option<usize>) -> CliResult<Curve> {
    let sp = SmoothParams::new(B, r, CUTOFF)?;
    let bounce = SmoothBounce::new(&sp)?;
    let rows = run_in_pool(jobs, || {
        taus.par_iter()
            .map(|&t| match perturbative_action(&sp, t) {
                Ok(a) => Row {
                    x: Some(t),
                    xi_b: Some(2.0 * a.tau1),
                    s_cl: Some(a.s),
                    s_cl_bare: Some(a.s0),
                    enhancement: Some(a.enhancement),
                    x_esc: Some(bounce.escape_point()),
                    warnings: a.warnings,
                    ..Row::default()
                },
                Err(e) => Row {
                    x: Some(t),
                    error: e.to_string(),
                    ..Row::default()
                },
            })
            .collect()
    });
    Ok(Curve {
        file: format!("smooth_r{}.csv", g12(r)),
        label: format!("smooth barrier, omega_B/omega_0 = {}", g12(r)),
        params: format!("v0={B} r={} cutoff={CUTOFF} gamma=0", g12(r)),
        rows,
        prefactor: false,
    })
}

fn build(name: &str, opts: &EvalOptions, jobs: Option<usize>) -> CliResult<(Vec<Curve>, PlotHints)> {
    let enh = |x_label, log_x| PlotHints {
        x_label,
        y_col: 5,
        y_label: "enhancement",
        log_x,
        log_y: true,
    };
    let loss = |x_label| PlotHints {
        x_label,
        y_col: 7,
        y_label: "energy loss",
        log_x: true,
        log_y: false,
    };
    let gammas = grid(0.01, 3.0, 40, Scale::Log);
    let mut curves = Vec::new();
    let hints = match name {
        "fig1b" => {
            let taus = grid(0.001, 0.06, 60, Scale::Linear);
            for s in [Asymmetry::Finite(0.01), Asymmetry::Finite(1e4), Asymmetry::Infinite] {
                let l = sigma_label(s);
                curves.push(numeric(
                    &format!("sigma_{l}.csv"),
                    format!("sigma/V0 = {l}"),
                    format!("v0={B} sigma={l} gamma=0 cutoff={CUTOFF}"),
                    &taus,
                    |t| params(s, 0.0, t, CUTOFF),
                    opts,
                    jobs,
                )?);
            }
            curves.push(analytic(
                "limit_sharp_wall.csv",
                "sharp-wall limit",
                format!("v0={B} sigma=inf gamma=0 cutoff={CUTOFF}"),
                &taus,
                |t| params(Asymmetry::Infinite, 0.0, t, CUTOFF),
                LimitFormula::SharpWall,
            )?);
            curves.push(analytic(
                "limit_near_symmetric.csv",
                "near-symmetric limit",
                format!("v0={B} sigma=0.01 gamma=0 cutoff={CUTOFF}"),
                &taus,
                |t| params(Asymmetry::Finite(0.01), 0.0, t, CUTOFF),
                LimitFormula::NearSymmetric,
            )?);
            enh("tau_p", false)
        }
        "fig3b" => {
            for s in [0.01, 1.0, 2.0, 10.0, 100.0].map(Asymmetry::Finite).into_iter().chain([Asymmetry::Infinite]) {
                let l = sigma_label(s);
                curves.push(numeric(
                    &format!("sigma_{l}.csv"),
                    format!("sigma/V0 = {l}"),
                    format!("v0={B} sigma={l} tau_p=0.5*gamma cutoff={CUTOFF}"),
                    &gammas,
                    |g| params(s, g, 0.5 * g, CUTOFF),
                    opts,
                    jobs,
                )?);
            }
            curves.push(analytic(
                "limit_intermediate_sigma_100.csv",
                "intermediate-regime formula, sigma/V0 = 100",
                format!("v0={B} sigma=100 tau_p=0.5*gamma"),
                &gammas,
                |g| params(Asymmetry::Finite(100.0), g, 0.5 * g, CUTOFF),
                LimitFormula::Intermediate,
            )?);
            enh("gamma", true)
        }
        "fig3c" => {
            for ratio in [0.25, 0.5, 1.0, 2.0, 4.0] {
                curves.push(numeric(
                    &format!("ratio_{}.csv", g12(ratio)),
                    format!("tau_p/gamma = {}", g12(ratio)),
                    format!("v0={B} sigma=2 tau_p={}*gamma cutoff={CUTOFF}", g12(ratio)),
                    &gammas,
                    |g| params(Asymmetry::Finite(2.0), g, ratio * g, CUTOFF),
                    opts,
                    jobs,
                )?);
            }
            enh("gamma", true)
        }
        "fig3d" => {
            let gs = grid(0.01, 3.0, 30, Scale::Log);
            for s in grid(0.01, 100.0, 9, Scale::Log) {
                curves.push(numeric(
                    &format!("sigma_{}.csv", g12(s)),
                    format!("sigma/V0 = {}", g12(s)),
                    format!("v0={B} sigma={} tau_p=0.5*gamma cutoff={CUTOFF}", g12(s)),
                    &gs,
                    |g| params(Asymmetry::Finite(s), g, 0.5 * g, CUTOFF),
                    opts,
                    jobs,
                )?);
            }
            enh("gamma", true)
        }
        "fig4b" => {
            let sigmas = grid(0.01, 1000.0, 41, Scale::Log);
            for (file, label, g, t) in [
                ("both.csv", "both couplings", 0.1, 0.1),
                ("momentum.csv", "momentum only", 0.0, 0.1),
                ("position.csv", "position only", 0.1, 0.0),
            ] {
                curves.push(numeric(
                    file,
                    label.into(),
                    format!("v0={B} gamma={g} tau_p={t} cutoff={CUTOFF}"),
                    &sigmas,
                    |s| params(Asymmetry::Finite(s), g, t, CUTOFF),
                    opts,
                    jobs,
                )?);
            }
            loss("sigma/V0")
        }
        "appC-K" => {
            let with_k = EvalOptions {
                prefactor: true,
                ..*opts
            };
            let gs = grid(0.01, 2.0, 20, Scale::Log);
            for s in [1.0, 2.0, 10.0] {
                curves.push(numeric(
                    &format!("sigma_{}.csv", g12(s)),
                    format!("sigma/V0 = {}", g12(s)),
                    format!("v0={B} sigma={} tau_p=0.5*gamma cutoff={CUTOFF}", g12(s)),
                    &gs,
                    |g| params(Asymmetry::Finite(s), g, 0.5 * g, CUTOFF),
                    &with_k,
                    jobs,
                )?);
            }
            PlotHints {
                x_label: "gamma",
                y_col: 10,
                y_label: "K/K0",
                log_x: true,
                log_y: false,
            }
        }
        "appD-a" => {
            let cs = grid(0.01, 100.0, 30, Scale::Log);
            for s in [1.0, 10.0] {
                for (kind, pos) in [("position", true), ("momentum", false)] {
                    curves.push(numeric(
                        &format!("{kind}_sigma_{}.csv", g12(s)),
                        format!("{kind} only, sigma/V0 = {}", g12(s)),
                        format!("v0={B} sigma={} cutoff={CUTOFF}", g12(s)),
                        &cs,
                        |c| {
                            let (g, t) = if pos { (c, 0.0) } else { (0.0, c) };
                            params(Asymmetry::Finite(s), g, t, CUTOFF)
                        },
                        opts,
                        jobs,
                    )?);
                }
            }
            loss("coupling")
        }
        "appD-b" => {
            let sigmas = grid(0.01, 1000.0, 41, Scale::Log);
            for wc in [100.0, 1000.0, 8000.0, 1e5] {
                curves.push(numeric(
                    &format!("cutoff_{}.csv", g12(wc)),
                    format!("omega_c = {}", g12(wc)),
                    format!("v0={B} gamma=0 tau_p=0.5 cutoff={}", g12(wc)),
                    &sigmas,
                    |s| params(Asymmetry::Finite(s), 0.0, 0.5, wc),
                    opts,
                    jobs,
                )?);
            }
            loss("sigma/V0")
        }
        "appE-b" => {
            let taus = grid(0.0005, 0.01, 20, Scale::Linear);
            for r in [1.0, 2.0, 20.0, 140.0] {
                curves.push(smooth_curve(r, &taus, jobs)?);
            }
            enh("tau_p", false)
        }
        "appE-d" => {
            let taus = grid(1e-4, 1e-2, 21, Scale::Log);
            let r = 140.0;
            curves.push(smooth_curve(r, &taus, jobs)?);
            let sp = SmoothParams::new(B, r, CUTOFF)?;
            let mapped = slope_mapped_sigma(&sp);
            curves.push(Curve {
                file: "limit_large_asymmetry.csv".into(),
                label: format!("large-asymmetry formula at sigma/V0 = {}", g12(mapped)),
                params: format!("v0={B} sigma={} gamma=0", g12(mapped)),
                rows: taus
                    .iter()
                    .map(|&t| Row::analytic(t, large_asymmetry_at_mapped_sigma(&sp, t).exp()))
                    .collect(),
                prefactor: false,
            });
            curves.push(numeric(
                "semi_double_parabola.csv",
                format!("semi-double parabola, sigma/V0 = {}", g12(mapped)),
                format!("v0={B} sigma={} gamma=0 cutoff={CUTOFF}", g12(mapped)),
                &taus,
                |t| params(Asymmetry::Finite(mapped), 0.0, t, CUTOFF),
                opts,
                jobs,
            )?);
            enh("tau_p", true)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown figure '{other}'; valid names: {}",
                FIGURES.join(", ")
            )))
        }
    };
    Ok((curves, hints))
}

fn plot_script(name: &str, curves: &[Curve], h: &PlotHints) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for {name}");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set xlabel '{}'", h.x_label);
    let _ = writeln!(s, "set ylabel '{}'", h.y_label);
    if h.log_x {
        let _ = writeln!(s, "set logscale x");
    }
    if h.log_y {
        let _ = writeln!(s, "set logscale y");
    }
    let parts: Vec<String> = curves
        .iter()
        .map(|c| format!("'{}' every ::1 using 1:{} with lines title '{}'", c.file, h.y_col, c.label))
        .collect();
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}

/// Writes one CSV per curve, `manifest.txt` and `plot.gp` into `outdir`.
pub fn run_figure(name: &str, outdir: &Path, opts: &EvalOptions, jobs: Option<usize>) -> CliResult<Vec<PathBuf>> {
    let (curves, hints) = build(name, opts, jobs)?;
    std::fs::create_dir_all(outdir)
        .map_err(|e| CliError::Unwritable(format!("{}: {e}", outdir.display())))?;
    let mut written = Vec::new();
    let mut manifest = format!("# figure {name}\n# file\tlabel\tparameters\n");
    let base = ModelParams::new(B, Asymmetry::Finite(1.0), 0.0, 0.0, CUTOFF)?;
    for c in &curves {
        let path = outdir.join(&c.file);
        let mut meta = metadata(&format!("figure {name}"), &base, &opts.quadrature, opts.method);
        // The baseline echo is replaced by the curve's own parameters.
        meta[2] = format!("curve: {}", c.label);
        meta.insert(3, format!("parameters: {}", c.params));
        emit(Some(&path), &meta, &c.rows, c.prefactor)?;
        let _ = writeln!(manifest, "{}\t{}\t{}", c.file, c.label, c.params);
        written.push(path);
    }
    for (file, text) in [("manifest.txt", manifest), ("plot.gp", plot_script(name, &curves, &hints))] {
        let path = outdir.join(file);
        std::fs::write(&path, text).map_err(|e| CliError::Unwritable(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

/// Rows of a figure without touching the filesystem.
pub fn curves(name: &str, opts: &EvalOptions, jobs: Option<usize>) -> CliResult<Vec<Curve>> {
    Ok(build(name, opts, jobs)?.0)
}

