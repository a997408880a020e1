//! Closed-form asymptotics of the enhancement in the large-cutoff limit.

use std::f64::consts::PI;

use crate::bounce::shape_excess;
use crate::error::{Error, Result};
use crate::model::{Asymmetry, ModelParams};
use crate::quad;
use crate::EULER_GAMMA;

/// Which asymptotic formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitFormula {
    /// Sharp wall, `ω_c ξ_B ≪ 1`: `ln ℰ = (4/π) B τ_p ln(ω_c/√e)`.
    SharpWall,
    /// `Σ ≫ V₀` with `ω_c ξ_B ≫ 1`: `ln ℰ = (2/π) B τ_p ln(k₁ Σ/V₀)`.
    LargeAsymmetry,
    /// `Σ ≪ V₀`: `ln ℰ = (4/π) B τ_p`.
    NearSymmetric,
    /// `ξ_B ≪ 1 ≪ ω_c ξ_B`, solving the nonlinear bounce-time relation.
    Intermediate,
    /// `Σ ≪ V₀` and `τ_p = 0`: suppression by position coupling.
    PositionOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub ln_enhancement: f64,
    pub enhancement: f64,
    /// Bounce time, for the formulas that produce one.
    pub xi_b: Option<f64>,
    pub warnings: Vec<String>,
}

/// `k₁ = e^{2(1-C)}/4`.
pub fn k1() -> f64 {
    (2.0 * (1.0 - EULER_GAMMA)).exp() / 4.0
}

/// `ln(Λ₁/Λ₂) / (2√(P₋² - 1))` in real arithmetic, continuous across `|P₋| = 1`.
pub fn log_root_ratio(gamma: f64, tau_p: f64) -> f64 {
    let pp = 0.5 * (gamma + tau_p);
    let pm = 0.5 * (gamma - tau_p);
    let d = 1.0 - pm * pm;
    if d.abs() < 1e-12 {
        return 1.0 / pp;
    }
    if d > 0.0 {
        let q = d.sqrt();
        q.atan2(pp) / q
    } else {
        let q = (-d).sqrt();
        (q / pp).atanh() / q
    }
}

/// Large-cutoff `⟨x²⟩` in closed form.
pub fn fluctuations_closed_form(gamma: f64, tau_p: f64, cutoff: f64) -> f64 {
    let sigma2 = gamma * tau_p;
    let sigma = sigma2.sqrt();
    let pm = 0.5 * (gamma - tau_p);
    let bracket = tau_p * (cutoff.ln() + sigma * sigma.atan() + (1.0 + sigma2).ln())
        + (1.0 + tau_p * pm) * log_root_ratio(gamma, tau_p);
    0.5 * 2.0 / (PI * (1.0 + sigma2)) * bracket
}

fn finite_sigma(p: &ModelParams) -> Result<f64> {
    match p.sigma_ratio() {
        Asymmetry::Finite(v) => Ok(v),
        Asymmetry::Infinite => Err(Error::domain("formula needs a finite asymmetry")),
    }
}

/// Evaluates one asymptotic formula. Parameters outside the formula's
/// window produce warnings, not errors.
pub fn analytic_limit(p: &ModelParams, which: LimitFormula) -> Result<LimitEstimate> {
    let b = p.barrier_b();
    let g = p.gamma();
    let t = p.tau_p();
    let wc = p.cutoff_w();
    let mut warnings = Vec::new();
    let mut xi_b = None;
    let ln_e = match which {
        LimitFormula::SharpWall => {
            if g != 0.0 {
                warnings.push("formula assumes gamma = 0".into());
            }
            if !p.is_sharp() {
                warnings.push("formula assumes an infinite asymmetry".into());
            }
            4.0 / PI * b * t * (wc.ln() - 0.5)
        }
        LimitFormula::LargeAsymmetry => {
            let v = finite_sigma(p)?;
            if g != 0.0 {
                warnings.push("formula assumes gamma = 0".into());
            }
            if v < 10.0 {
                warnings.push("formula assumes sigma >> 1".into());
            }
            2.0 / PI * b * t * (k1() * v).ln()
        }
        LimitFormula::NearSymmetric => {
            let v = finite_sigma(p)?;
            if g != 0.0 {
                warnings.push("formula assumes gamma = 0".into());
            }
            if v > 0.1 {
                warnings.push("formula assumes sigma << 1".into());
            }
            4.0 / PI * b * t
        }
        LimitFormula::Intermediate => {
            let v = finite_sigma(p)?;
            let (ln_e, xi, w) = intermediate(b, v, g, t)?;
            warnings.extend(w);
            xi_b = Some(xi);
            if wc * xi < 10.0 {
                warnings.push(format!("cutoff times bounce time is only {}", wc * xi));
            }
            ln_e
        }
        LimitFormula::PositionOnly => {
            let v = finite_sigma(p)?;
            if t != 0.0 {
                warnings.push("formula assumes tau_p = 0".into());
            }
            if v > 0.1 {
                warnings.push("formula assumes sigma << 1".into());
            }
            if g == 0.0 {
                0.0
            } else {
                let pm = 0.5 * (g - t);
                let lr = log_root_ratio(g, t);
                let eps1 = 8.0 / PI * b * g * (EULER_GAMMA - 1.0)
                    - 4.0 * b * (2.0 / PI * (g * pm - 1.0) * lr + 1.0);
                -eps1 - 8.0 / PI * b * g * (8.0 / PI * g / v).ln()
            }
        }
    };
    Ok(LimitEstimate {
        ln_enhancement: ln_e,
        enhancement: ln_e.exp(),
        xi_b,
        warnings,
    })
}

/// Solves the intermediate-regime bounce-time relation on the branch
/// connected to `τ_p = 0` and returns `(ln ℰ, ξ_B, warnings)`.
fn intermediate(b: f64, v: f64, g: f64, t: f64) -> Result<(f64, f64, Vec<String>)> {
    let mut warnings = Vec::new();
    let s = 2.0 + shape_excess(v);
    let sigma2 = g * t;
    let pm = 0.5 * (g - t);
    let lr = log_root_ratio(g, t);
    let lead = (1.0 + t * pm) * lr;
    let shift = -0.5 * (1.0 + sigma2).ln() + EULER_GAMMA - 1.0;
    let lhs = |xi: f64| {
        if xi <= 0.0 {
            return -1.0 / s;
        }
        xi / (PI * (1.0 + sigma2)) * (lead - t * (xi.ln() + shift)) - 1.0 / s
    };
    let xi0 = PI * (1.0 + sigma2) / (s * lead);
    let xi = if t == 0.0 {
        xi0
    } else {
        // The left side rises to a maximum at ln ξ = lead/τ_p - shift - 1.
        let ln_peak = lead / t - shift - 1.0;
        let peak = ln_peak.min(700.0).exp();
        if lhs(peak) < 0.0 {
            warnings.push("no solution on the branch connected to tau_p = 0".into());
            return Err(Error::NoBracket {
                what: "intermediate bounce time".into(),
                lo: 0.0,
                hi: peak,
            });
        }
        let (lo, hi) = quad::grow_bracket(lhs, 0.0, xi0.min(peak), peak)
            .unwrap_or((0.0, peak));
        quad::brent(lhs, lo, hi, 1e-15 * hi)?
    };
    let action = |xi: f64| b * s * xi - b * s * s * xi * xi * t / (2.0 * PI * (1.0 + sigma2));
    let s_cl = action(xi);
    // Same formula at zero coupling: ξ = 2/s and S = 2B.
    let s_ref = 2.0 * b;
    Ok((-(s_cl - s_ref), xi, warnings))
}
