//! Smooth-barrier variant: a harmonic well joined at `x = 0` to an inverted
//! parabola of frequency `r = ω_B/ω₀`, treated to first order in the
//! momentum coupling by freezing the dissipation-free bounce.
//!
//! ```text
//! V(x) = ½ (x + a)²                     x < 0
//!      = -(r²/2) [(x - c a)² - 2 d]     x > 0,   c = 1/r²,  d = (a² c/2)(1 + c)
//! ```
//!
//! The minimum sits at `-a` with `a = √(2B/(1 + c))`, so the barrier height
//! `r² d` equals `B` for every `r`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::limits::k1;
use crate::model::QuadratureConfig;
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothParams {
    barrier_b: f64,
    freq_ratio: f64,
    cutoff_w: f64,
}

impl SmoothParams {
    pub fn new(barrier_b: f64, freq_ratio: f64, cutoff_w: f64) -> Result<Self> {
        if !(barrier_b > 0.0) || !barrier_b.is_finite() {
            return Err(Error::domain("barrier height must be finite and > 0"));
        }
        if !(freq_ratio > 0.0) || !freq_ratio.is_finite() {
            return Err(Error::domain("frequency ratio must be finite and > 0"));
        }
        if !(cutoff_w > 0.0) || !cutoff_w.is_finite() {
            return Err(Error::domain("cutoff must be finite and > 0"));
        }
        Ok(SmoothParams {
            barrier_b,
            freq_ratio,
            cutoff_w,
        })
    }

    pub fn barrier_b(&self) -> f64 {
        self.barrier_b
    }
    pub fn freq_ratio(&self) -> f64 {
        self.freq_ratio
    }
    pub fn cutoff_w(&self) -> f64 {
        self.cutoff_w
    }

    /// `c = ω₀²/ω_B²`
    pub fn c(&self) -> f64 {
        1.0 / (self.freq_ratio * self.freq_ratio)
    }

    /// Distance `a` from the junction to the well minimum.
    pub fn minimum(&self) -> f64 {
        (2.0 * self.barrier_b / (1.0 + self.c())).sqrt()
    }

    pub fn d(&self) -> f64 {
        let a = self.minimum();
        let c = self.c();
        0.5 * a * a * c * (1.0 + c)
    }

    /// Position `c a` of the barrier top.
    pub fn barrier_top(&self) -> f64 {
        self.c() * self.minimum()
    }
}

pub fn smooth_potential(x: f64, sp: &SmoothParams) -> f64 {
    let a = sp.minimum();
    if x < 0.0 {
        0.5 * (x + a) * (x + a)
    } else {
        let r2 = sp.freq_ratio * sp.freq_ratio;
        let u = x - sp.barrier_top();
        -0.5 * r2 * (u * u - 2.0 * sp.d())
    }
}

pub fn smooth_potential_slope(x: f64, sp: &SmoothParams) -> f64 {
    if x < 0.0 {
        x + sp.minimum()
    } else {
        -sp.freq_ratio * sp.freq_ratio * (x - sp.barrier_top())
    }
}

/// Inner amplitude `B(τ₁)` as a function of `θ = r τ₁`.
fn inner_amplitude(theta: f64, sp: &SmoothParams) -> f64 {
    let r = sp.freq_ratio;
    (sp.c() + 1.0) * sp.minimum() / (r * theta.sin() - theta.cos())
}

const SCAN_STEP: f64 = 1e-3;

/// `τ₁` with `x(±τ₁) = 0`: the smallest root of `c a + B(τ₁) cos(r τ₁) = 0`
/// with `B > 0`. Sign changes across the pole of `B` are discarded.
pub fn matching_time(sp: &SmoothParams) -> Result<f64> {
    let a = sp.minimum();
    let h = |theta: f64| sp.barrier_top() + inner_amplitude(theta, sp) * theta.cos();
    let pole = |theta: f64| sp.freq_ratio * theta.sin() - theta.cos();
    let n = (PI / SCAN_STEP).floor() as usize;
    let mut prev = (SCAN_STEP, h(SCAN_STEP));
    for i in 2..n {
        let theta = i as f64 * SCAN_STEP;
        let cur = (theta, h(theta));
        let across_pole = pole(prev.0).signum() != pole(cur.0).signum();
        if !across_pole && prev.1.is_finite() && cur.1.is_finite() && prev.1.signum() != cur.1.signum() {
            let root = quad::brent(h, prev.0, cur.0, 1e-15)?;
            if h(root).abs() <= 1e-9 * a && inner_amplitude(root, sp) > 0.0 {
                return Ok(root / sp.freq_ratio);
            }
        }
        prev = cur;
    }
    Err(Error::NoBracket {
        what: "matching time".into(),
        lo: 0.0,
        hi: PI / sp.freq_ratio,
    })
}

/// Dissipation-free bounce: cosine arc for `|τ| < τ₁`, exponential tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothBounce {
    pub tau1: f64,
    /// `A(τ₁)`, tail amplitude measured from the minimum.
    pub amp_a: f64,
    /// `B(τ₁)`, arc amplitude about the barrier top.
    pub amp_b: f64,
    params: SmoothParams,
}

impl SmoothBounce {
    pub fn new(sp: &SmoothParams) -> Result<Self> {
        let tau1 = matching_time(sp)?;
        let r = sp.freq_ratio;
        let amp_b = inner_amplitude(r * tau1, sp);
        let amp_a = (sp.c() + 1.0) * sp.minimum() + amp_b * (r * tau1).cos();
        Ok(SmoothBounce {
            tau1,
            amp_a,
            amp_b,
            params: *sp,
        })
    }

    pub fn value(&self, tau: f64) -> f64 {
        let s = tau.abs();
        let sp = &self.params;
        if s < self.tau1 {
            sp.barrier_top() + self.amp_b * (sp.freq_ratio * s).cos()
        } else {
            -sp.minimum() + self.amp_a * (-(s - self.tau1)).exp()
        }
    }

    pub fn velocity(&self, tau: f64) -> f64 {
        let s = tau.abs();
        let r = self.params.freq_ratio;
        let v = if s < self.tau1 {
            -r * self.amp_b * (r * s).sin()
        } else {
            -self.amp_a * (-(s - self.tau1)).exp()
        };
        v * tau.signum()
    }

    /// Turning point `x(0)`.
    pub fn escape_point(&self) -> f64 {
        self.params.barrier_top() + self.amp_b
    }

    /// `ỹ(ω) = ∫ (x(τ) + a) e^{iωτ} dτ`, real since the path is even.
    pub fn transform(&self, w: f64) -> f64 {
        let sp = &self.params;
        let (a_tail, b, t1) = (self.amp_a, self.amp_b, self.tau1);
        let r = sp.freq_ratio;
        let sinc = |k: f64| if k.abs() < 1e-8 { t1 } else { (k * t1).sin() / k };
        let (sw, cw) = (w * t1).sin_cos();
        let plateau = (sp.c() + 1.0) * sp.minimum() * 2.0 * sinc(w);
        let arc = b * (sinc(r - w) + sinc(r + w));
        let tails = 2.0 * a_tail * (cw - w * sw) / (1.0 + w * w);
        plateau + arc + tails
    }

    /// `S₀ = A² - (r B²/2) sin(2 r τ₁) + 2 r² d τ₁`.
    pub fn action(&self) -> f64 {
        let sp = &self.params;
        let r = sp.freq_ratio;
        let b = self.amp_b;
        self.amp_a * self.amp_a - 0.5 * r * b * b * (2.0 * r * self.tau1).sin()
            + 2.0 * r * r * sp.d() * self.tau1
    }
}

pub fn smooth_bounce(tau: f64, sp: &SmoothParams) -> Result<f64> {
    Ok(SmoothBounce::new(sp)?.value(tau))
}

/// `dV/dx` at the far turning point of the dissipation-free bounce,
/// `-r² √(2d) = -a √(1 + r²)`.
pub fn slope_at_escape(sp: &SmoothParams) -> f64 {
    let x = sp.barrier_top() + (2.0 * sp.d()).sqrt();
    smooth_potential_slope(x, sp)
}

/// `Σ/V₀` of the semi-double parabola whose escape-point slope `-√(2Σ)`
/// equals the smooth one.
pub fn slope_mapped_sigma(sp: &SmoothParams) -> f64 {
    let s = slope_at_escape(sp);
    0.5 * s * s / sp.barrier_b
}

/// `(1/2π) ∫₀^∞ F^(p)(ω) ω² ỹ(ω)² dω` with
/// `F^(p) = -τ_p ω_c ω / (ω_c + (1 + τ_p ω_c) ω)`. The integral stops at
/// `400·scale`, so `ỹ` must decay at least like `ω⁻³`; a mapped infinite
/// tail would feed roundoff in the phases of `ỹ` back into the sum.
pub fn momentum_action_shift(
    transform: impl Fn(f64) -> f64,
    tau_p: f64,
    cutoff: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(tau_p >= 0.0) || !(cutoff > 0.0) {
        return Err(Error::domain("tau_p must be >= 0 and the cutoff > 0"));
    }
    if tau_p == 0.0 {
        return Ok(0.0);
    }
    let f = |w: f64| {
        let y = transform(w);
        let kernel = -tau_p * cutoff * w / (cutoff + (1.0 + tau_p * cutoff) * w);
        kernel * w * w * y * y
    };
    let reach = 400.0 * scale;
    let head = quad::integrate_panels(f, 0.0, reach, 0.5 * scale.min(PI), cfg)?;
    Ok(head.value / (2.0 * PI))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothAction {
    pub tau1: f64,
    pub s0: f64,
    pub s_dis: f64,
    pub s: f64,
    pub ln_enhancement: f64,
    pub enhancement: f64,
    pub warnings: Vec<String>,
}

/// First-order action with the frozen bounce; `ℰ = e^{-S_dis}`.
pub fn perturbative_action(sp: &SmoothParams, tau_p: f64) -> Result<SmoothAction> {
    if !(tau_p >= 0.0) || !tau_p.is_finite() {
        return Err(Error::domain("tau_p must be finite and >= 0"));
    }
    let bounce = SmoothBounce::new(sp)?;
    let mut warnings = Vec::new();
    if tau_p > 0.05 {
        warnings.push(format!("tau_p = {tau_p} is outside the weak-coupling window"));
    }
    let scale = sp.freq_ratio.max(1.0).max(1.0 / bounce.tau1);
    let s_dis = momentum_action_shift(
        |w| bounce.transform(w),
        tau_p,
        sp.cutoff_w,
        scale,
        &QuadratureConfig::default(),
    )?;
    let s0 = bounce.action();
    Ok(SmoothAction {
        tau1: bounce.tau1,
        s0,
        s_dis,
        s: s0 + s_dis,
        ln_enhancement: -s_dis,
        enhancement: (-s_dis).exp(),
        warnings,
    })
}

/// Large-asymmetry formula evaluated at the slope-mapped asymmetry.
pub fn large_asymmetry_at_mapped_sigma(sp: &SmoothParams, tau_p: f64) -> f64 {
    2.0 / PI * sp.barrier_b * tau_p * (k1() * slope_mapped_sigma(sp)).ln()
}
