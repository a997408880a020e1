//! Acceptance gate: one PASS/FAIL line per criterion. Tolerances and time
//! budgets are pinned below; the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qtunnel::bounce::{classical_action, enhancement, solve_bounce_time};
use qtunnel::limits::{analytic_limit, LimitFormula};
use qtunnel::path::{eom_residual, energy_loss, path_value, reconstruct_path, symmetric_grid};
use qtunnel::prefactor::{phases, prefactor_k, negative_eigenvalue};
use qtunnel::smooth::{
    large_asymmetry_at_mapped_sigma, matching_time, perturbative_action, slope_at_escape,
    slope_mapped_sigma, SmoothParams,
};
use qtunnel::spectral::{Method, Spectral};
use qtunnel::{Asymmetry, ModelParams, QuadratureConfig, Result};

const B: f64 = 12.5;
const CUTOFF: f64 = 8000.0;

const TOL_EXACT: f64 = 1e-6;
const TOL_LIMIT: f64 = 0.05;
const TOL_SMOOTH: f64 = 0.10;
const TOL_MATCHING_TIME: f64 = 1e-8;
const TOL_SLOPE: f64 = 1e-6;
const TOL_ORACLE: f64 = 1e-7;
const TOL_EOM: f64 = 1e-4;
const TOL_SATURATION: f64 = 0.05;
const TOL_LAMBDA1: f64 = 0.20;
const TOL_PHASE_DECAY: f64 = 0.01;
/// Spectral parameter at which the phases must have decayed.
const LAMBDA_FAR: f64 = 1e10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn params(sigma: Asymmetry, g: f64, t: f64) -> ModelParams {
    ModelParams::new(B, sigma, g, t, CUTOFF).unwrap()
}

fn fin(sigma: f64, g: f64, t: f64) -> ModelParams {
    params(Asymmetry::Finite(sigma), g, t)
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ln_e(p: &ModelParams) -> Result<f64> {
    Ok(enhancement(p, &cfg(), Method::Expansion)?.ln_enhancement)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn c01() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for sigma in [0.01, 1.0, 3.0, 100.0] {
        let p = fin(sigma, 0.0, 0.0);
        let s = 1.0 + (1.0 + sigma).sqrt();
        let xi_want = (s / (s - 2.0)).ln();
        let s_want = B * xi_want * (2.0 * s - s * s) + 2.0 * B * s;
        let xi = solve_bounce_time(&p, &cfg(), Method::Expansion)?;
        let action = classical_action(&p, xi, &cfg(), Method::Expansion)?;
        worst = worst.max(rel(xi, xi_want)).max(rel(action, s_want));
    }
    Ok(outcome(
        worst < TOL_EXACT,
        format!("max rel error {worst:.2e} (tol {TOL_EXACT:.0e})"),
    ))
}

/// Worst relative log-deviation from a limit formula over `tau_p` values.
fn limit_sweep(sigma: Asymmetry, which: LimitFormula, taus: &[f64]) -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for &t in taus {
        let p = params(sigma, 0.0, t);
        let want = analytic_limit(&p, which)?.ln_enhancement;
        let d = (ln_e(&p)? - want) / want;
        if d.abs() > worst.abs() {
            worst = d;
            at = t;
        }
    }
    Ok((worst, at))
}

fn c02() -> Result<Outcome> {
    let taus = log_grid(1e-4, 1e-2, 9);
    let (worst, at) = limit_sweep(Asymmetry::Infinite, LimitFormula::SharpWall, &taus)?;
    let ref_e = analytic_limit(&params(Asymmetry::Infinite, 0.0, 0.01), LimitFormula::SharpWall)?
        .enhancement;
    let ok_ref = (ref_e - 3.87).abs() < 0.01;
    Ok(outcome(
        worst.abs() < TOL_LIMIT && ok_ref,
        format!(
            "worst ln E deviation {:+.2}% at tau_p={at:.0e} (tol {:.0}%); formula E(0.01)={ref_e:.3}",
            100.0 * worst,
            100.0 * TOL_LIMIT
        ),
    ))
}

fn c03() -> Result<Outcome> {
    let sigma = 1e4;
    let xi = solve_bounce_time(&fin(sigma, 0.0, 0.0), &cfg(), Method::Expansion)?;
    let taus = log_grid(1e-4, 1e-2, 9);
    let (worst, at) = limit_sweep(Asymmetry::Finite(sigma), LimitFormula::LargeAsymmetry, &taus)?;
    let wide = CUTOFF * xi > 100.0;
    Ok(outcome(
        worst.abs() < TOL_LIMIT && wide,
        format!(
            "worst ln E deviation {:+.2}% at tau_p={at:.0e} (tol {:.0}%), k1={:.4}, wc*xi_B={:.0}",
            100.0 * worst,
            100.0 * TOL_LIMIT,
            qtunnel::limits::k1(),
            CUTOFF * xi
        ),
    ))
}

fn c04() -> Result<Outcome> {
    let taus = log_grid(1e-4, 1e-2, 9);
    let (worst, at) = limit_sweep(Asymmetry::Finite(0.01), LimitFormula::NearSymmetric, &taus)?;
    Ok(outcome(
        worst.abs() < TOL_LIMIT,
        format!(
            "worst ln E deviation {:+.2}% at tau_p={at:.0e} (tol {:.0}%)",
            100.0 * worst,
            100.0 * TOL_LIMIT
        ),
    ))
}

fn c05() -> Result<Outcome> {
    let sigmas = [Asymmetry::Infinite, Asymmetry::Finite(1e4), Asymmetry::Finite(0.01)];
    let taus: Vec<f64> = (1..=60).map(|k| 0.001 * k as f64).collect();
    let mut monotone = true;
    let mut at_005 = [0.0; 3];
    for (j, &s) in sigmas.iter().enumerate() {
        let mut last = 0.0;
        for &t in &taus {
            let v = ln_e(&params(s, 0.0, t))?;
            monotone &= v > last;
            last = v;
            if (t - 0.05).abs() < 1e-12 {
                at_005[j] = v;
            }
        }
    }
    let ordered = at_005[0] > at_005[1] && at_005[1] > at_005[2];
    Ok(outcome(
        monotone && ordered,
        format!(
            "strictly increasing: {monotone}; E at 0.05 = {:.3} > {:.3} > {:.3}: {ordered}",
            at_005[0].exp(),
            at_005[1].exp(),
            at_005[2].exp()
        ),
    ))
}

fn c06() -> Result<Outcome> {
    let gammas: Vec<f64> = (1..=20).map(|k| 0.05 * k as f64).collect();
    let mut suppressed = true;
    let mut last = 0.0;
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for &g in &gammas {
        let p = fin(0.01, g, 0.0);
        let v = ln_e(&p)?;
        suppressed &= v < 0.0 && v < last;
        last = v;
        let want = analytic_limit(&p, LimitFormula::PositionOnly)?.ln_enhancement;
        let d = (v - want) / want;
        if d.abs() > worst.abs() {
            worst = d;
            at = g;
        }
    }
    Ok(outcome(
        suppressed && worst.abs() < TOL_LIMIT,
        format!(
            "E < 1 and decreasing: {suppressed}; worst ln E deviation from position-only law {:+.1}% at gamma={at} (tol {:.0}%)",
            100.0 * worst,
            100.0 * TOL_LIMIT
        ),
    ))
}

fn c07() -> Result<Outcome> {
    let gammas: Vec<f64> = (1..=60).map(|k| 0.05 * k as f64).collect();
    let vals = gammas
        .iter()
        .map(|&g| ln_e(&fin(2.0, g, 0.5 * g)))
        .collect::<Result<Vec<_>>>()?;
    let (imax, vmax) = vals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let interior = imax > 0 && imax + 1 < vals.len();
    let rises = vmax > 0.0;
    let falls = *vals.last().unwrap() < vmax;
    Ok(outcome(
        interior && rises && falls,
        format!(
            "max E={:.4} at gamma={:.2} (interior: {interior}); E(0.05)={:.4}, E(3)={:.4}",
            vmax.exp(),
            gammas[imax],
            vals[0].exp(),
            vals.last().unwrap().exp()
        ),
    ))
}

fn loss(p: &ModelParams) -> Result<f64> {
    Ok(energy_loss(p, &cfg(), Method::Expansion)?.value)
}

fn c08() -> Result<Outcome> {
    let mut elastic: f64 = 0.0;
    for sigma in [0.01, 1.0, 3.0, 100.0] {
        elastic = elastic.max(loss(&fin(sigma, 0.0, 0.0))?);
    }
    let mut bounded = true;
    for (sigma, g, t) in [(0.01, 0.1, 0.0), (1.0, 0.0, 0.1), (1.0, 0.5, 0.25), (10.0, 2.0, 0.0), (100.0, 0.0, 1.0)] {
        let l = loss(&fin(sigma, g, t))?;
        bounded &= l > 0.0 && l <= sigma * B;
    }
    let pos = loss(&fin(1.0, 50.0, 0.0))?;
    let mom = loss(&fin(1.0, 0.0, 50.0))?;
    let sat = rel(pos, mom);
    // Momentum-only versus position-only loss at equal strength 0.1.
    let sigmas = log_grid(0.1, 1000.0, 41);
    let mut crossing = None;
    let mut prev: Option<(f64, f64)> = None;
    for &s in &sigmas {
        let d = loss(&fin(s, 0.0, 0.1))? - loss(&fin(s, 0.1, 0.0))?;
        if let Some((ps, pd)) = prev {
            if pd < 0.0 && d >= 0.0 && crossing.is_none() {
                crossing = Some((ps * s).sqrt());
            }
        }
        prev = Some((s, d));
    }
    let cross_ok = matches!(crossing, Some(c) if c > 1.0 && c < 100.0);
    Ok(outcome(
        elastic < 1e-6 && bounded && sat < TOL_SATURATION && cross_ok,
        format!(
            "elastic loss {elastic:.1e}; bounded: {bounded}; saturation mismatch {:.2}% (tol {:.0}%); crossing near sigma={}",
            100.0 * sat,
            100.0 * TOL_SATURATION,
            crossing.map_or("none".into(), |c| format!("{c:.2}"))
        ),
    ))
}

fn c09() -> Result<Outcome> {
    let bare = prefactor_k(&fin(1.0, 0.0, 0.0), &cfg(), Method::Expansion)?;
    let unit = (bare.k_ratio - 1.0).abs() < TOL_EXACT;
    let mut threshold_ok = true;
    let mut threshold_notes = Vec::new();
    let mut decay: f64 = 0.0;
    for (sigma, g, t) in [(1.0, 0.0, 0.0), (1.0, 0.0, 0.1), (1.0, 0.2, 0.1), (2.0, 1.0, 0.5)] {
        let p = fin(sigma, g, t);
        let xi = solve_bounce_time(&p, &cfg(), Method::Expansion)?;
        let (lo_p, lo_m) = phases(&p, 1.0, xi)?;
        let ok = (lo_p + PI).abs() < 1e-9 && (lo_m + PI).abs() < 1e-9;
        if !ok {
            threshold_notes.push(format!("({g},{t}): {:.4}pi,{:.4}pi", lo_p / PI, lo_m / PI));
        }
        threshold_ok &= ok;
        let (hi_p, hi_m) = phases(&p, LAMBDA_FAR, xi)?;
        decay = decay.max(hi_p.abs()).max(hi_m.abs());
    }
    let p = fin(0.01, 0.0, 0.0);
    let xi = solve_bounce_time(&p, &cfg(), Method::Expansion)?;
    let lambda1 = negative_eigenvalue(&p, xi)?.abs();
    let lambda_ok = (lambda1 / 0.01 - 1.0).abs() < TOL_LAMBDA1;
    let mut k_min = f64::INFINITY;
    for t in [0.01, 0.05, 0.1, 0.15, 0.2] {
        k_min = k_min.min(prefactor_k(&fin(1.0, 0.0, t), &cfg(), Method::Expansion)?.k_ratio);
    }
    let enhanced = k_min > 1.0;
    Ok(outcome(
        unit && threshold_ok && decay < TOL_PHASE_DECAY && lambda_ok && enhanced,
        format!(
            "K/K0-1={:.1e}; threshold phases -pi: {threshold_ok}{}; |phase| at lambda=1e10: {decay:.1e}; |lambda1|={lambda1:.5}; min K/K0 (gamma=0)={k_min:.3}",
            bare.k_ratio - 1.0,
            if threshold_notes.is_empty() { String::new() } else { format!(" [{}]", threshold_notes.join(" ")) },
        ),
    ))
}

fn c10() -> Result<Outcome> {
    let sp = |r: f64| SmoothParams::new(B, r, CUTOFF).unwrap();
    let t1 = matching_time(&sp(1.0))?;
    let t1_ok = (t1 - 0.75 * PI).abs() < TOL_MATCHING_TIME;
    let s20 = slope_at_escape(&sp(20.0));
    let s140 = slope_at_escape(&sp(140.0));
    let slopes_ok = (s20 + 100.0).abs() < TOL_SLOPE && (s140 + 700.0).abs() < TOL_SLOPE;
    let p = sp(140.0);
    let mut worst: f64 = 0.0;
    for t in [1e-4, 5e-4, 1e-3, 2.5e-3] {
        let got = perturbative_action(&p, t)?.ln_enhancement;
        let want = large_asymmetry_at_mapped_sigma(&p, t);
        let d = (got - want) / want;
        if d.abs() > worst.abs() {
            worst = d;
        }
    }
    Ok(outcome(
        t1_ok && slopes_ok && worst.abs() < TOL_SMOOTH,
        format!(
            "tau1-3pi/4={:.1e}; slopes {s20:.6}, {s140:.6}; worst ln E deviation at mapped sigma={:.0}: {:+.2}% (tol {:.0}%)",
            t1 - 0.75 * PI,
            slope_mapped_sigma(&p),
            100.0 * worst,
            100.0 * TOL_SMOOTH
        ),
    ))
}

fn c11() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0011);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let sigma = 10f64.powf(rng.gen_range(-2.0..2.0));
        let g = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.5) };
        let t = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..0.3) };
        let wc = rng.gen_range(50.0..2000.0);
        let p = ModelParams::new(B, Asymmetry::Finite(sigma), g, t, wc)?;
        let xa = solve_bounce_time(&p, &cfg(), Method::Expansion)?;
        let xb = solve_bounce_time(&p, &cfg(), Method::Quadrature)?;
        let sa = classical_action(&p, xa, &cfg(), Method::Expansion)?;
        let sb = classical_action(&p, xb, &cfg(), Method::Quadrature)?;
        worst = worst.max(rel(xa, xb)).max(rel(sa, sb));
    }
    Ok(outcome(
        worst < TOL_ORACLE,
        format!("max rel difference over 30 sets {worst:.2e} (tol {TOL_ORACLE:.0e})"),
    ))
}

fn c12() -> Result<Outcome> {
    let mut eom: f64 = 0.0;
    let mut saddle: f64 = 0.0;
    for (sigma, g, t) in [(1.0, 0.2, 0.0), (1.0, 0.0, 0.05), (2.0, 0.5, 0.25), (20.0, 1.0, 0.5)] {
        let p = fin(sigma, g, t);
        let xi = solve_bounce_time(&p, &cfg(), Method::Expansion)?;
        let path = reconstruct_path(&p, xi, &symmetric_grid(10.0, 401), &cfg(), Method::Expansion)?;
        eom = eom.max(eom_residual(&path, &p)?);
        let sp = Spectral::new(&p, &cfg(), Method::Expansion)?;
        let x = path_value(&sp, &p, xi, 0.5 * xi)?;
        saddle = saddle.max(rel(x, p.barrier_edge()));
    }
    Ok(outcome(
        eom < TOL_EOM && saddle < TOL_EXACT,
        format!("max EOM residual {eom:.1e} (tol {TOL_EOM:.0e}); saddle identity {saddle:.1e} (tol {TOL_EXACT:.0e})"),
    ))
}

type Criterion = (&'static str, &'static str, Option<f64>, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("C01", "zero-coupling exactness", Some(1.0), c01),
        ("C02", "sharp-wall limit", Some(5.0), c02),
        ("C03", "large-asymmetry limit", None, c03),
        ("C04", "near-symmetric limit", None, c04),
        ("C05", "enhancement versus tau_p", Some(30.0), c05),
        ("C06", "position-coupling suppression", None, c06),
        ("C07", "non-monotonic gamma dependence", Some(60.0), c07),
        ("C08", "energy loss", None, c08),
        ("C09", "prefactor", Some(120.0), c09),
        ("C10", "smooth barrier", None, c10),
        ("C11", "expansion versus quadrature", Some(60.0), c11),
        ("C12", "equation of motion and saddle identity", None, c12),
    ];
    let mut passed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = budget.map_or(true, |b| secs < b);
        let pass = pass && in_time;
        let budget_note = budget.map_or(String::new(), |b| format!(" / {b:.0} s"));
        println!(
            "{id} {} {name}: {detail} [{secs:.2} s{budget_note}]",
            if pass { "PASS" } else { "FAIL" }
        );
        passed += pass as usize;
    }
    println!("acceptance: {passed}/12 criteria pass");
    if passed != 12 {
        std::process::exit(1);
    }
}
