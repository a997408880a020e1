//! Physical parameters in reduced units (ħ = m = ω₀ = 1), the piecewise
//! metastable potential, and the bath kernel denominator.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly;

/// Asymmetry Σ/V₀ of the potential beyond the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Asymmetry {
    Finite(f64),
    /// Infinitely steep far side of the barrier (sharp wall).
    Infinite,
}

impl Asymmetry {
    pub fn is_infinite(self) -> bool {
        matches!(self, Asymmetry::Infinite)
    }

    /// Numeric value, `f64::INFINITY` for the sharp wall.
    pub fn value(self) -> f64 {
        match self {
            Asymmetry::Finite(v) => v,
            Asymmetry::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Asymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Asymmetry::Finite(v) => write!(f, "{v}"),
            Asymmetry::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Asymmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Asymmetry::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::domain(format!("cannot parse sigma value '{t}'")))?;
        if v.is_infinite() && v > 0.0 {
            return Ok(Asymmetry::Infinite);
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain("sigma must be > 0 or inf"));
        }
        Ok(Asymmetry::Finite(v))
    }
}

/// Dimensionless model inputs. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    barrier_b: f64,
    sigma_ratio: Asymmetry,
    gamma: f64,
    tau_p: f64,
    cutoff_w: f64,
}

impl ModelParams {
    pub fn new(
        barrier_b: f64,
        sigma_ratio: Asymmetry,
        gamma: f64,
        tau_p: f64,
        cutoff_w: f64,
    ) -> Result<Self> {
        if !(barrier_b > 0.0) || !barrier_b.is_finite() {
            return Err(Error::domain("barrier height must be positive"));
        }
        if let Asymmetry::Finite(v) = sigma_ratio {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("sigma must be > 0 or inf"));
            }
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::domain("gamma must be >= 0"));
        }
        if !(tau_p >= 0.0) || !tau_p.is_finite() {
            return Err(Error::domain("tau_p must be >= 0"));
        }
        if !(cutoff_w > 0.0) || !cutoff_w.is_finite() {
            return Err(Error::domain("cutoff must be > 0"));
        }
        Ok(ModelParams {
            barrier_b,
            sigma_ratio,
            gamma,
            tau_p,
            cutoff_w,
        })
    }

    pub fn barrier_b(&self) -> f64 {
        self.barrier_b
    }
    pub fn sigma_ratio(&self) -> Asymmetry {
        self.sigma_ratio
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn tau_p(&self) -> f64 {
        self.tau_p
    }
    pub fn cutoff_w(&self) -> f64 {
        self.cutoff_w
    }

    pub fn is_sharp(&self) -> bool {
        self.sigma_ratio.is_infinite()
    }

    /// Same potential and cutoff with both couplings switched off.
    pub fn uncoupled(&self) -> Self {
        ModelParams {
            gamma: 0.0,
            tau_p: 0.0,
            ..*self
        }
    }

    pub fn with_couplings(&self, gamma: f64, tau_p: f64) -> Result<Self> {
        Self::new(self.barrier_b, self.sigma_ratio, gamma, tau_p, self.cutoff_w)
    }

    pub fn with_sigma(&self, sigma_ratio: Asymmetry) -> Result<Self> {
        Self::new(self.barrier_b, sigma_ratio, self.gamma, self.tau_p, self.cutoff_w)
    }

    pub fn with_cutoff(&self, cutoff_w: f64) -> Result<Self> {
        Self::new(self.barrier_b, self.sigma_ratio, self.gamma, self.tau_p, cutoff_w)
    }

    /// Barrier position `a = √(2B)`; the well parabola reaches height B there.
    pub fn barrier_edge(&self) -> f64 {
        (2.0 * self.barrier_b).sqrt()
    }

    /// `s = 1 + √(1 + Σ/V₀)`, infinite for the sharp wall.
    pub fn shape_factor(&self) -> f64 {
        match self.sigma_ratio {
            Asymmetry::Finite(v) => 1.0 + (1.0 + v).sqrt(),
            Asymmetry::Infinite => f64::INFINITY,
        }
    }

    /// Start of the flat region `x_m = a s`.
    pub fn flat_edge(&self) -> f64 {
        self.barrier_edge() * self.shape_factor()
    }

    /// Absolute drop Σ in energy units.
    pub fn sigma(&self) -> f64 {
        self.sigma_ratio.value() * self.barrier_b
    }

    /// Warnings for parameters outside the large-cutoff assumption.
    pub fn advisories(&self) -> Vec<String> {
        let mut out = Vec::new();
        let scale = 1f64.max(self.gamma).max(self.tau_p);
        if self.cutoff_w < 10.0 * scale {
            out.push(format!(
                "cutoff {} is not large compared to max(1, gamma, tau_p) = {}",
                self.cutoff_w, scale
            ));
        }
        out
    }
}

/// Region of the piecewise potential containing a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Well,
    Barrier,
    Flat,
    SharpWall,
}

pub fn region(x: f64, p: &ModelParams) -> Region {
    let a = p.barrier_edge();
    if x < a {
        Region::Well
    } else if p.is_sharp() {
        Region::SharpWall
    } else if x < p.flat_edge() {
        Region::Barrier
    } else {
        Region::Flat
    }
}

/// Potential energy. Beyond the sharp wall the value is `-inf`
/// (see [`region`] to tell it apart).
pub fn potential(x: f64, p: &ModelParams) -> f64 {
    match region(x, p) {
        Region::Well => 0.5 * x * x,
        Region::Barrier => {
            let d = x - p.flat_edge();
            0.5 * d * d - p.sigma()
        }
        Region::Flat => -p.sigma(),
        Region::SharpWall => f64::NEG_INFINITY,
    }
}

/// Force gradient `dV/dx`.
pub fn potential_slope(x: f64, p: &ModelParams) -> f64 {
    match region(x, p) {
        Region::Well => x,
        Region::Barrier => x - p.flat_edge(),
        Region::Flat => 0.0,
        Region::SharpWall => f64::NEG_INFINITY,
    }
}

/// Which Drude factors survive in the reduced numerator of `1/D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumeratorFactors {
    /// `ω_c + ω`
    pub drude: bool,
    /// `ω_c + (1 + τ_p ω_c) ω`
    pub momentum: bool,
}

/// `D(ω) = ω²/(1 + τ_p ω f_c) + 1 + γ ω f_c` with `f_c = 1/(1 + ω/ω_c)`.
///
/// Clearing the Drude denominators gives `1/D = A·Bq / Q` with
/// `A = ω_c + ω`, `Bq = ω_c + (1 + τ_p ω_c) ω` and the monic quartic
/// `Q = ω² A² + A·Bq + γ ω_c ω Bq`. Common factors are cancelled exactly
/// when a coupling vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDenominator {
    gamma: f64,
    tau_p: f64,
    cutoff: f64,
    cleared_num: Vec<f64>,
    quartic: Vec<f64>,
    reduced_num: Vec<f64>,
    reduced_den: Vec<f64>,
    factors: NumeratorFactors,
}

impl KernelDenominator {
    pub fn new(p: &ModelParams) -> Self {
        Self::from_couplings(p.gamma, p.tau_p, p.cutoff_w)
    }

    pub fn from_couplings(gamma: f64, tau_p: f64, cutoff: f64) -> Self {
        let a = vec![cutoff, 1.0];
        let bq = vec![cutoff, 1.0 + tau_p * cutoff];
        let w2 = vec![0.0, 0.0, 1.0];
        let cleared_num = poly::mul(&a, &bq);
        let quartic = poly::add(
            &poly::add(&poly::mul(&w2, &poly::mul(&a, &a)), &cleared_num),
            &poly::scale(&poly::mul(&[0.0, 1.0], &bq), gamma * cutoff),
        );
        let (reduced_num, reduced_den, factors) = match (gamma > 0.0, tau_p > 0.0) {
            (true, true) => (
                cleared_num.clone(),
                quartic.clone(),
                NumeratorFactors {
                    drude: true,
                    momentum: true,
                },
            ),
            (true, false) => {
                // Bq = A: Q = A (ω² A + A + γ ω_c ω)
                let den = poly::add(
                    &poly::add(&poly::mul(&w2, &a), &a),
                    &[0.0, gamma * cutoff],
                );
                (
                    a.clone(),
                    den,
                    NumeratorFactors {
                        drude: true,
                        momentum: false,
                    },
                )
            }
            (false, true) => {
                // Q = A (ω² A + Bq)
                let den = poly::add(&poly::mul(&w2, &a), &bq);
                (
                    bq.clone(),
                    den,
                    NumeratorFactors {
                        drude: false,
                        momentum: true,
                    },
                )
            }
            (false, false) => (
                vec![1.0],
                vec![1.0, 0.0, 1.0],
                NumeratorFactors {
                    drude: false,
                    momentum: false,
                },
            ),
        };
        KernelDenominator {
            gamma,
            tau_p,
            cutoff,
            cleared_num,
            quartic,
            reduced_num,
            reduced_den,
            factors,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn tau_p(&self) -> f64 {
        self.tau_p
    }
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Term-by-term evaluation of `D(ω)`.
    pub fn eval(&self, w: f64) -> f64 {
        let fc = 1.0 / (1.0 + w / self.cutoff);
        w * w / (1.0 + self.tau_p * w * fc) + 1.0 + self.gamma * w * fc
    }

    /// `D(ω) = Q(ω) / (A Bq)` from the stored cleared polynomials.
    pub fn eval_cleared(&self, w: f64) -> f64 {
        poly::eval(&self.quartic, w) / poly::eval(&self.cleared_num, w)
    }

    /// `1/D` from the reduced rational form.
    pub fn inverse(&self, w: f64) -> f64 {
        poly::eval(&self.reduced_num, w) / poly::eval(&self.reduced_den, w)
    }

    /// Ascending coefficients of the monic quartic `Q`.
    pub fn quartic(&self) -> &[f64] {
        &self.quartic
    }
    pub fn cleared_numerator(&self) -> &[f64] {
        &self.cleared_num
    }
    pub fn reduced_numerator(&self) -> &[f64] {
        &self.reduced_num
    }
    pub fn reduced_denominator(&self) -> &[f64] {
        &self.reduced_den
    }
    pub fn factors(&self) -> NumeratorFactors {
        self.factors
    }
}

/// `D(ω)` for the given parameters.
pub fn kernel_denominator(w: f64, p: &ModelParams) -> f64 {
    KernelDenominator::new(p).eval(w)
}

/// Tolerances for the direct-quadrature routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Direct integration runs to `tail_mult · ω_c` before the remaining
    /// oscillatory tail is summed by series acceleration.
    pub tail_mult: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 50,
            tail_mult: 50.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.max_depth == 0 {
            return Err(Error::domain("max_depth must be positive"));
        }
        if !(self.tail_mult > 0.0) {
            return Err(Error::domain("tail_mult must be positive"));
        }
        Ok(())
    }
}
