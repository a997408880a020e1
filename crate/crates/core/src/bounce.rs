//! Bounce time, classical action and the dissipative enhancement of the
//! escape exponent.

use crate::error::{Error, Result};
use crate::model::{Asymmetry, ModelParams, QuadratureConfig};
use crate::quad;
use crate::roots::RootTable;
use crate::spectral::{Method, Spectral};

/// Asymmetry at or below which the near-symmetric tag is used.
pub const NEAR_SYMMETRIC_MAX: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Infinite asymmetry; the bounce time vanishes.
    Sharp,
    General,
    NearSymmetric,
}

impl Regime {
    pub fn of(p: &ModelParams) -> Self {
        match p.sigma_ratio() {
            Asymmetry::Infinite => Regime::Sharp,
            Asymmetry::Finite(v) if v <= NEAR_SYMMETRIC_MAX => Regime::NearSymmetric,
            Asymmetry::Finite(_) => Regime::General,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Sharp => "SHARP",
            Regime::General => "GENERAL",
            Regime::NearSymmetric => "NEAR_SYMMETRIC",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BounceSolution {
    pub xi_b: f64,
    pub s_cl: f64,
    pub s_cl_bare: f64,
    pub enhancement: f64,
    /// `ln ℰ = -(S_cl - S_cl⁰)`, kept separately since ℰ can overflow.
    pub ln_enhancement: f64,
    pub regime: Regime,
    pub warnings: Vec<String>,
}

/// `s - 2 = √(1 + Σ/V₀) - 1` without cancellation.
pub(crate) fn shape_excess(sigma_ratio: f64) -> f64 {
    sigma_ratio / ((1.0 + sigma_ratio).sqrt() + 1.0)
}

/// Zero-coupling bounce time `ln(s/(s-2))`.
pub fn bare_bounce_time(sigma_ratio: f64) -> f64 {
    let s = 2.0 + shape_excess(sigma_ratio);
    (s / shape_excess(sigma_ratio)).ln()
}

/// Zero-coupling action `B ξ (2s - s²) + 2 B s`, or `2B` for the sharp wall.
pub fn bare_action(p: &ModelParams) -> f64 {
    let b = p.barrier_b();
    match p.sigma_ratio() {
        Asymmetry::Infinite => 2.0 * b,
        Asymmetry::Finite(v) => {
            let s = 2.0 + shape_excess(v);
            let xi = bare_bounce_time(v);
            b * xi * s * (2.0 - s) + 2.0 * b * s
        }
    }
}

/// `L(ξ)`, the left side of the saddle condition `L(ξ_B) = 1/s`.
pub fn bounce_lhs(xi: f64, p: &ModelParams, q: &QuadratureConfig, m: Method) -> Result<f64> {
    Spectral::new(p, q, m)?.saddle_lhs(xi)
}

const XI_LIMIT: f64 = 1e6;

/// Solves `L(ξ_B) = 1/s` on a geometrically grown bracket.
pub fn solve_bounce_time_with(sp: &Spectral, p: &ModelParams) -> Result<f64> {
    let v = match p.sigma_ratio() {
        Asymmetry::Infinite => return Ok(0.0),
        Asymmetry::Finite(v) => v,
    };
    let target = 1.0 / (2.0 + shape_excess(v));
    let mut err = None;
    let mut f = |xi: f64| match sp.saddle_lhs(xi) {
        Ok(l) => l - target,
        Err(e) => {
            err.get_or_insert(e);
            f64::NAN
        }
    };
    // The bare time is a good scale for the first bracket.
    let guess = bare_bounce_time(v).max(1e-8);
    let (lo, hi) = quad::grow_bracket(&mut f, 0.0, guess, XI_LIMIT).map_err(|e| match e {
        Error::NoBracket { lo, hi, .. } => Error::NoBracket {
            what: "bounce time".into(),
            lo,
            hi,
        },
        other => other,
    })?;
    let xi = quad::brent(&mut f, lo, hi, 1e-14 * hi)?;
    if let Some(e) = err {
        return Err(e);
    }
    let resid = (sp.saddle_lhs(xi)? - target).abs();
    if resid > sp.config().rel_tol * target {
        return Err(Error::numerical("bounce time", resid / target));
    }
    Ok(xi)
}

pub fn solve_bounce_time(p: &ModelParams, q: &QuadratureConfig, m: Method) -> Result<f64> {
    solve_bounce_time_with(&Spectral::new(p, q, m)?, p)
}

/// `S = 2 B s ξ - 2 B s² I_S(ξ)`; `a²/(2⟨x²⟩)` for the sharp wall.
pub fn classical_action_with(sp: &Spectral, p: &ModelParams, xi: f64) -> Result<f64> {
    let b = p.barrier_b();
    match p.sigma_ratio() {
        Asymmetry::Infinite => {
            let a = p.barrier_edge();
            Ok(a * a / (2.0 * sp.fluctuations()?))
        }
        Asymmetry::Finite(_) => {
            let s = p.shape_factor();
            Ok(2.0 * b * s * xi - 2.0 * b * s * s * sp.action_integral(xi)?)
        }
    }
}

pub fn classical_action(
    p: &ModelParams,
    xi: f64,
    q: &QuadratureConfig,
    m: Method,
) -> Result<f64> {
    classical_action_with(&Spectral::new(p, q, m)?, p, xi)
}

/// Solves the bounce and compares its action with the zero-coupling value.
pub fn enhancement(p: &ModelParams, q: &QuadratureConfig, m: Method) -> Result<BounceSolution> {
    let sp = Spectral::new(p, q, m)?;
    let xi_b = solve_bounce_time_with(&sp, p)?;
    let s_cl = classical_action_with(&sp, p, xi_b)?;
    let s_cl_bare = bare_action(p);
    let mut warnings = p.advisories();
    if !(s_cl > 0.0) {
        warnings.push(format!("classical action is not positive: {s_cl}"));
    }
    if sp.roots().degenerate {
        warnings.push("coincident kernel poles were split".into());
    }
    let ln_enhancement = if p.gamma() == 0.0 && p.tau_p() == 0.0 {
        0.0
    } else {
        -(s_cl - s_cl_bare)
    };
    Ok(BounceSolution {
        xi_b,
        s_cl,
        s_cl_bare,
        enhancement: ln_enhancement.exp(),
        ln_enhancement,
        regime: Regime::of(p),
        warnings,
    })
}

pub fn denominator_roots(p: &ModelParams) -> Result<RootTable> {
    RootTable::new(p)
}

/// `⟨x²⟩` from the pole expansion.
pub fn fluctuations(p: &ModelParams) -> Result<f64> {
    Spectral::new(p, &QuadratureConfig::default(), Method::Expansion)?.fluctuations()
}
