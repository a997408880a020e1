//! Browser bindings: enhancement sweeps, bounce paths and the potential.
//!
//! Each export has a plain Rust twin returning `qtunnel::Result` so the
//! numbers can be tested natively. An asymmetry of `Infinity` selects the
//! sharp wall. Reduced units throughout, with `V₀ = 12.5`.

use wasm_bindgen::prelude::*;

use qtunnel::bounce::enhancement;
use qtunnel::model::potential;
use qtunnel::path::{reconstruct_path, symmetric_grid};
use qtunnel::spectral::Method;
use qtunnel::{Asymmetry, ModelParams, QuadratureConfig};

pub const V0: f64 = 12.5;

fn asymmetry(sigma: f64) -> Asymmetry {
    if sigma.is_infinite() && sigma > 0.0 {
        Asymmetry::Infinite
    } else {
        Asymmetry::Finite(sigma)
    }
}

fn params(sigma: f64, gamma: f64, tau_p: f64, cutoff: f64) -> qtunnel::Result<ModelParams> {
    ModelParams::new(V0, asymmetry(sigma), gamma, tau_p, cutoff)
}

/// `ln ℰ` on `n` log-spaced γ in `[g_min, g_max]` with `τ_p = ratio·γ`.
/// Points that fail to solve are `NaN`.
pub fn ln_enhancement_sweep(
    sigma: f64,
    cutoff: f64,
    ratio: f64,
    g_min: f64,
    g_max: f64,
    n: usize,
) -> qtunnel::Result<Vec<f64>> {
    if !(g_min > 0.0 && g_max > g_min) || n < 2 {
        return Err(qtunnel::Error::Domain("need 0 < g_min < g_max and n >= 2".into()));
    }
    params(sigma, 0.0, 0.0, cutoff)?;
    let q = QuadratureConfig::default();
    Ok((0..n)
        .map(|i| {
            let g = g_min * (g_max / g_min).powf(i as f64 / (n - 1) as f64);
            params(sigma, g, ratio * g, cutoff)
                .and_then(|p| enhancement(&p, &q, Method::Expansion))
                .map_or(f64::NAN, |s| s.ln_enhancement)
        })
        .collect())
}

/// Bounce path on `n` points of `[-half, half]`, followed by `x_esc`.
pub fn bounce_path_values(
    sigma: f64,
    gamma: f64,
    tau_p: f64,
    cutoff: f64,
    half: f64,
    n: usize,
) -> qtunnel::Result<Vec<f64>> {
    let p = params(sigma, gamma, tau_p, cutoff)?;
    let q = QuadratureConfig::default();
    let xi = qtunnel::bounce::solve_bounce_time(&p, &q, Method::Expansion)?;
    let path = reconstruct_path(&p, xi, &symmetric_grid(half, n), &q, Method::Expansion)?;
    let mut out = path.x;
    out.push(path.x_esc);
    Ok(out)
}

/// `V(x)` on `n` points of `[x_min, x_max]`; the sharp wall beyond `a` is `-inf`.
pub fn potential_values(sigma: f64, x_min: f64, x_max: f64, n: usize) -> qtunnel::Result<Vec<f64>> {
    let p = params(sigma, 0.0, 0.0, 8000.0)?;
    let n = n.max(2);
    Ok((0..n)
        .map(|i| potential(x_min + (x_max - x_min) * i as f64 / (n - 1) as f64, &p))
        .collect())
}

fn js(r: qtunnel::Result<Vec<f64>>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn enhancement_curve(
    sigma: f64,
    cutoff: f64,
    ratio: f64,
    g_min: f64,
    g_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    js(ln_enhancement_sweep(sigma, cutoff, ratio, g_min, g_max, n))
}

#[wasm_bindgen]
pub fn bounce_path(sigma: f64, gamma: f64, tau_p: f64, cutoff: f64, half: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(bounce_path_values(sigma, gamma, tau_p, cutoff, half, n))
}

#[wasm_bindgen]
pub fn potential_curve(sigma: f64, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(potential_values(sigma, x_min, x_max, n))
}

/// Barrier edge `a` and flat edge `x_m` (`+inf` for the sharp wall).
#[wasm_bindgen]
pub fn barrier_edges(sigma: f64) -> Result<Vec<f64>, JsError> {
    js(params(sigma, 0.0, 0.0, 8000.0).map(|p| {
        let xm = if p.is_sharp() { f64::INFINITY } else { p.flat_edge() };
        vec![p.barrier_edge(), xm]
    }))
}
