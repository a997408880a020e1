//! Bounce trajectory in imaginary time, escape point, energy loss and the
//! equation-of-motion check.
//!
//! The frequency-domain bounce is `x(ω) = 2 a s sin(ωξ/2) / (ω D(ω))`,
//! so `x_cl(τ) = a s [L(ξ/2 + τ) + L(ξ/2 - τ)]` with `L` odd.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bounce::solve_bounce_time_with;
use crate::error::{Error, Result};
use crate::model::{potential, potential_slope, ModelParams, QuadratureConfig};
use crate::poly;
use crate::quad;
use crate::roots::residues;
use crate::spectral::{Method, Spectral};
use crate::specfun::aux_pair;

/// Default half-width of the τ grid.
pub const DEFAULT_HALF_WIDTH: f64 = 40.0;
/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 2001;
/// Half-width of the window around the kinks excluded from the residual.
pub const KINK_WINDOW: f64 = 0.1;

/// `x(ω)`, the cosine-transform amplitude of the bounce.
pub fn path_amplitude(w: f64, p: &ModelParams, xi: f64) -> f64 {
    let amp = p.flat_edge();
    let d = crate::model::kernel_denominator(w, p);
    if w == 0.0 {
        return amp * xi;
    }
    2.0 * amp * (0.5 * w * xi).sin() / (w * d)
}

/// Uniform grid on `[-half_width, half_width]`.
pub fn symmetric_grid(half_width: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BouncePath {
    pub tau: Vec<f64>,
    pub x: Vec<f64>,
    pub x_esc: f64,
    /// `∫ ẋ² dτ`.
    pub kinetic_norm: f64,
    pub xi_b: f64,
    /// Prefactor `a s` of the transform; scaling a path scales this too.
    pub amplitude: f64,
}

impl BouncePath {
    /// The same path multiplied by `factor` (a detuned trial path).
    pub fn scaled(&self, factor: f64) -> Self {
        BouncePath {
            x: self.x.iter().map(|v| v * factor).collect(),
            x_esc: self.x_esc * factor,
            kinetic_norm: self.kinetic_norm * factor * factor,
            amplitude: self.amplitude * factor,
            ..self.clone()
        }
    }
}

/// Signed `L(b)`, extended as an odd function.
fn odd_lhs(sp: &Spectral, b: f64) -> Result<f64> {
    Ok(b.signum() * sp.saddle_lhs(b.abs())?)
}

/// `x_cl(τ)` for a known bounce time.
pub fn path_value(sp: &Spectral, p: &ModelParams, xi: f64, tau: f64) -> Result<f64> {
    let amp = p.flat_edge();
    Ok(amp * (odd_lhs(sp, 0.5 * xi + tau)? + odd_lhs(sp, 0.5 * xi - tau)?))
}

/// `ẋ_cl(τ) = a s [K(ξ/2 + τ) - K(ξ/2 - τ)]`.
pub fn path_velocity(sp: &Spectral, p: &ModelParams, xi: f64, tau: f64) -> Result<f64> {
    let amp = p.flat_edge();
    let b1 = 0.5 * xi + tau;
    let b2 = 0.5 * xi - tau;
    // K(|b₁|) - K(|b₂|) = drop(|b₂|) - drop(|b₁|), which avoids K(0)
    Ok(amp * (sp.correlation_drop(b2.abs())? - sp.correlation_drop(b1.abs())?))
}

/// Samples the bounce on `grid`.
pub fn reconstruct_path(
    p: &ModelParams,
    xi: f64,
    grid: &[f64],
    q: &QuadratureConfig,
    m: Method,
) -> Result<BouncePath> {
    finite_only(p)?;
    let sp = Spectral::new(p, q, m)?;
    let x = grid
        .iter()
        .map(|&t| path_value(&sp, p, xi, t))
        .collect::<Result<Vec<_>>>()?;
    let x_esc = path_value(&sp, p, xi, 0.0)?;
    let kinetic_norm = kinetic_norm_with(&sp, p, xi)?;
    Ok(BouncePath {
        tau: grid.to_vec(),
        x,
        x_esc,
        kinetic_norm,
        xi_b: xi,
        amplitude: p.flat_edge(),
    })
}

fn finite_only(p: &ModelParams) -> Result<()> {
    if p.is_sharp() {
        return Err(Error::domain("the bounce path needs a finite asymmetry"));
    }
    Ok(())
}

/// Turning point `x_cl(0) = 2 a s L(ξ_B/2)`.
pub fn escape_point(p: &ModelParams, q: &QuadratureConfig, m: Method) -> Result<f64> {
    finite_only(p)?;
    let sp = Spectral::new(p, q, m)?;
    let xi = solve_bounce_time_with(&sp, p)?;
    path_value(&sp, p, xi, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLoss {
    /// `-V(x_esc)` clamped to `[0, Σ]`.
    pub value: f64,
    pub raw: f64,
    pub x_esc: f64,
    /// Set when the raw value fell outside `[0, Σ]`.
    pub clamped: bool,
}

/// Average energy lost to the baths during tunneling, `V(0) - V(x_esc)`.
pub fn energy_loss(p: &ModelParams, q: &QuadratureConfig, m: Method) -> Result<EnergyLoss> {
    let x_esc = escape_point(p, q, m)?;
    Ok(energy_loss_at(p, x_esc))
}

pub fn energy_loss_at(p: &ModelParams, x_esc: f64) -> EnergyLoss {
    let raw = -potential(x_esc, p);
    let sigma = p.sigma();
    let value = raw.clamp(0.0, sigma);
    EnergyLoss {
        value,
        raw,
        x_esc,
        clamped: value != raw,
    }
}

/// `∫ ẋ² dτ = (2a²s²/π) ∫₀^∞ (1 - cos ωξ) / D² dω`.
pub fn kinetic_norm(p: &ModelParams, xi: f64, q: &QuadratureConfig, m: Method) -> Result<f64> {
    finite_only(p)?;
    kinetic_norm_with(&Spectral::new(p, q, m)?, p, xi)
}

pub(crate) fn kinetic_norm_with(sp: &Spectral, p: &ModelParams, xi: f64) -> Result<f64> {
    if xi == 0.0 {
        return Ok(0.0);
    }
    let amp = p.flat_edge();
    let scale = 2.0 * amp * amp / PI;
    let rt = sp.roots();
    if sp.method() == Method::Quadrature || rt.degenerate {
        let k = sp.kernel();
        let cfg = sp.config();
        let half = PI / xi;
        let reach = cfg.tail_mult * k.cutoff().max(1.0);
        let n = ((reach * xi / PI - 0.5).ceil()).max(0.0);
        let w = (n + 0.5) * half;
        let inv2 = |x: f64| {
            let d = k.eval(x);
            1.0 / (d * d)
        };
        let head = quad::integrate_panels(
            |x| {
                let s = (0.5 * x * xi).sin();
                2.0 * s * s * inv2(x)
            },
            0.0,
            w,
            half,
            cfg,
        )?;
        let smooth = quad::integrate_tail(inv2, w, cfg)?;
        let osc = quad::integrate_oscillatory(|x| (x * xi).cos() * inv2(x), w, half, w, cfg)?;
        return Ok(scale * (head.value + smooth.value - osc.value));
    }
    // 1/D² = Σ r_k²/(ω+p_k)² + Σ s_k/(ω+p_k)
    let poles = &rt.poles;
    let res = &rt.residues;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..poles.len() {
        let (f, g) = aux_pair(poles[k] * xi);
        let mut sk = Complex64::new(0.0, 0.0);
        for j in 0..poles.len() {
            if j != k {
                sk += res[j] / (poles[j] - poles[k]);
            }
        }
        sk *= 2.0 * res[k];
        total += res[k] * res[k] * xi * f - sk * (poles[k].ln() + g);
    }
    Ok(scale * total.re)
}

/// Terms of the equation of motion sampled on the path grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EomTerms {
    pub tau: Vec<f64>,
    /// `-ẍ`
    pub inertia: Vec<f64>,
    /// Position-bath force.
    pub position_bath: Vec<f64>,
    /// Momentum-bath force.
    pub momentum_bath: Vec<f64>,
    /// `V'(x_cl)`
    pub slope: Vec<f64>,
}

impl EomTerms {
    pub fn residual(&self) -> Vec<f64> {
        (0..self.tau.len())
            .map(|i| self.inertia[i] + self.position_bath[i] + self.momentum_bath[i] + self.slope[i])
            .collect()
    }
}

/// Partial-fraction data of a proper rational `num / Π(ω + p_k)`.
struct Rational {
    poles: Vec<Complex64>,
    res: Vec<Complex64>,
}

impl Rational {
    fn new(num: &[f64], poles: &[Complex64]) -> Self {
        Rational {
            poles: poles.to_vec(),
            res: residues(num, poles),
        }
    }

    fn zero() -> Self {
        Rational {
            poles: Vec::new(),
            res: Vec::new(),
        }
    }

    /// `(1/π) ∫₀^∞ sin(ωb) R(ω) dω`, with `∫ sin(ωb)/(ω+p) = sgn(b) f(|b|p)`.
    fn sine_transform(&self, b: f64) -> f64 {
        if b == 0.0 {
            return 0.0;
        }
        let sum: Complex64 = self
            .poles
            .iter()
            .zip(&self.res)
            .map(|(&p, &r)| r * aux_pair(p * b.abs()).0)
            .sum();
        b.signum() * sum.re / PI
    }
}

/// Evaluates each term of the equation of motion on the path's grid from
/// its own frequency representation.
pub fn eom_terms(path: &BouncePath, p: &ModelParams) -> Result<EomTerms> {
    finite_only(p)?;
    let sp = Spectral::new(p, &QuadratureConfig::default(), Method::Expansion)?;
    let k = sp.kernel();
    let rt = sp.roots();
    let f = k.factors();
    let wc = k.cutoff();
    let num = k.reduced_numerator();
    let a_fac = [wc, 1.0];
    let bq_fac = [wc, 1.0 + k.tau_p() * wc];

    // ω²x(ω) = 2as sin(ωξ/2) · ω/D
    let inertia = Rational::new(&poly::mul(&[0.0, 1.0], num), &rt.poles);
    // γ ω f_c x(ω) = 2as sin(ωξ/2) · γ ω_c (N/A) / Q
    let pos = if k.gamma() > 0.0 {
        let n_over_a = if f.momentum { bq_fac.to_vec() } else { vec![1.0] };
        Rational::new(&poly::scale(&n_over_a, k.gamma() * wc), &rt.poles)
    } else {
        Rational::zero()
    };
    // F^p x(ω) = 2as sin(ωξ/2) · (-τ_p ω_c ω² N/Bq) / Q
    let mom = if k.tau_p() > 0.0 {
        let n_over_bq = if f.drude { a_fac.to_vec() } else { vec![1.0] };
        let n = poly::mul(&[0.0, 0.0, 1.0], &n_over_bq);
        Rational::new(&poly::scale(&n, -k.tau_p() * wc), &rt.poles)
    } else {
        Rational::zero()
    };

    let xi = path.xi_b;
    let amp = path.amplitude;
    // sin(ωξ/2) cos(ωτ) = ½[sin(ω(ξ/2+τ)) + sin(ω(ξ/2-τ))]
    let eval = |r: &Rational, t: f64| {
        amp * (r.sine_transform(0.5 * xi + t) + r.sine_transform(0.5 * xi - t))
    };
    let mut out = EomTerms {
        tau: path.tau.clone(),
        inertia: Vec::with_capacity(path.tau.len()),
        position_bath: Vec::with_capacity(path.tau.len()),
        momentum_bath: Vec::with_capacity(path.tau.len()),
        slope: Vec::with_capacity(path.tau.len()),
    };
    for (&t, &x) in path.tau.iter().zip(&path.x) {
        out.inertia.push(eval(&inertia, t));
        out.position_bath.push(eval(&pos, t));
        out.momentum_bath.push(eval(&mom, t));
        out.slope.push(potential_slope(x, p));
    }
    Ok(out)
}

/// Max-norm of the equation-of-motion residual away from the kinks at `±ξ_B/2`.
pub fn eom_residual(path: &BouncePath, p: &ModelParams) -> Result<f64> {
    let terms = eom_terms(path, p)?;
    let kink = 0.5 * path.xi_b;
    Ok(terms
        .residual()
        .iter()
        .zip(&terms.tau)
        .filter(|(_, &t)| (t.abs() - kink).abs() > KINK_WINDOW)
        .map(|(r, _)| r.abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounce::solve_bounce_time;
    use crate::model::Asymmetry;

    fn params(sigma: f64, g: f64, t: f64) -> ModelParams {
        ModelParams::new(12.5, Asymmetry::Finite(sigma), g, t, 8000.0).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn bare_escape_point() {
        let p = params(3.0, 0.0, 0.0);
        let a = p.barrier_edge();
        let x = escape_point(&p, &cfg(), Method::Expansion).unwrap();
        assert!((x - a * (3.0 - 3f64.sqrt())).abs() < 1e-12);
        let loss = energy_loss(&p, &cfg(), Method::Expansion).unwrap();
        assert!(loss.value < 1e-12);
    }

    #[test]
    fn amplitude_limits() {
        let p = params(3.0, 0.0, 0.0);
        let xi = 3f64.ln();
        let amp = p.flat_edge();
        assert_eq!(path_amplitude(0.0, &p, xi), amp * xi);
        let want = 2.0 * amp * (0.5 * xi).sin() / 2.0;
        assert!((path_amplitude(1.0, &p, xi) - want).abs() < 1e-14);
    }

    #[test]
    fn bare_kinetic_norm() {
        let p = params(3.0, 0.0, 0.0);
        let xi = 3f64.ln();
        let a = p.barrier_edge();
        let want = a * a * 4.5 * (1.0 - (1.0 + xi) / 3.0);
        let got = kinetic_norm(&p, xi, &cfg(), Method::Expansion).unwrap();
        assert!((got - want).abs() < 1e-12 * want);
    }

    #[test]
    fn kinetic_norm_expansion_matches_quadrature() {
        let p = ModelParams::new(12.5, Asymmetry::Finite(1.0), 0.1, 0.05, 300.0).unwrap();
        let xi = solve_bounce_time(&p, &cfg(), Method::Expansion).unwrap();
        let a = kinetic_norm(&p, xi, &cfg(), Method::Expansion).unwrap();
        let b = kinetic_norm(&p, xi, &cfg(), Method::Quadrature).unwrap();
        assert!((a - b).abs() < 1e-8 * a, "{a} {b}");
    }

    #[test]
    fn saddle_crossing() {
        let p = params(1.0, 0.1, 0.05);
        let sp = Spectral::new(&p, &cfg(), Method::Expansion).unwrap();
        let xi = solve_bounce_time_with(&sp, &p).unwrap();
        let x = path_value(&sp, &p, xi, 0.5 * xi).unwrap();
        assert!((x / p.barrier_edge() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eom_holds_and_detects_detuning() {
        let p = params(1.0, 0.1, 0.05);
        let xi = solve_bounce_time(&p, &cfg(), Method::Expansion).unwrap();
        let grid = symmetric_grid(10.0, 201);
        let path = reconstruct_path(&p, xi, &grid, &cfg(), Method::Expansion).unwrap();
        let r = eom_residual(&path, &p).unwrap();
        assert!(r < 1e-8, "{r}");
        let bad = eom_residual(&path.scaled(1.1), &p).unwrap();
        assert!(bad > 1e-2, "{bad}");
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let p = params(1.0, 0.2, 0.1);
        let sp = Spectral::new(&p, &cfg(), Method::Expansion).unwrap();
        let xi = solve_bounce_time_with(&sp, &p).unwrap();
        for t in [0.3, 2.0, 5.0] {
            let h = 1e-5;
            let fd = (path_value(&sp, &p, xi, t + h).unwrap()
                - path_value(&sp, &p, xi, t - h).unwrap())
                / (2.0 * h);
            let v = path_velocity(&sp, &p, xi, t).unwrap();
            assert!((fd - v).abs() < 1e-6 * v.abs().max(1e-3), "{t}: {fd} {v}");
        }
    }
}
