//! Frequency integrals of the inverse kernel `1/D(ω)` that build the bounce.
//!
//! ```text
//! L(ξ)   = (1/π) ∫₀^∞ sin(ωξ) / (ω D) dω
//! I_S(ξ) = (1/π) ∫₀^∞ (1 - cos ωξ) / (ω² D) dω
//! K(t)   = (1/π) ∫₀^∞ cos(ωt) / D dω
//! ```
//!
//! Each has an exact expansion over the poles of `1/D` and a direct
//! quadrature route used as an oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{KernelDenominator, ModelParams, QuadratureConfig};
use crate::quad;
use crate::roots::RootTable;
use crate::specfun::{aux_f_shifted, aux_g_regular, aux_pair};

/// How frequency integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Partial-fraction expansion in the auxiliary functions.
    #[default]
    Expansion,
    /// Direct adaptive quadrature.
    Quadrature,
}

#[derive(Debug, Clone)]
pub struct Spectral {
    kernel: KernelDenominator,
    roots: RootTable,
    cfg: QuadratureConfig,
    method: Method,
}

impl Spectral {
    pub fn new(p: &ModelParams, cfg: &QuadratureConfig, method: Method) -> Result<Self> {
        cfg.validate()?;
        let kernel = KernelDenominator::new(p);
        let roots = RootTable::from_kernel(&kernel)?;
        Ok(Spectral {
            kernel,
            roots,
            cfg: *cfg,
            method,
        })
    }

    pub fn roots(&self) -> &RootTable {
        &self.roots
    }
    pub fn kernel(&self) -> &KernelDenominator {
        &self.kernel
    }
    pub fn method(&self) -> Method {
        self.method
    }
    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    fn pole_sum(&self, mut term: impl FnMut(Complex64, Complex64) -> Complex64) -> f64 {
        self.roots
            .poles
            .iter()
            .zip(&self.roots.residues)
            .map(|(&p, &r)| term(p, r))
            .sum::<Complex64>()
            .re
    }

    fn reach(&self) -> f64 {
        self.cfg.tail_mult * self.kernel.cutoff().max(1.0)
    }

    /// `L(ξ)`; tends to 1/2 as `ξ -> ∞`.
    pub fn saddle_lhs(&self, xi: f64) -> Result<f64> {
        check_time(xi)?;
        if xi == 0.0 {
            return Ok(0.0);
        }
        match self.method {
            Method::Expansion => {
                Ok(self.pole_sum(|p, r| -r / p * aux_f_shifted(p * xi)) / PI)
            }
            Method::Quadrature => {
                let k = &self.kernel;
                let f = |w: f64| {
                    if w == 0.0 {
                        xi
                    } else {
                        (w * xi).sin() / (w * k.eval(w))
                    }
                };
                let r = quad::integrate_oscillatory(f, 0.0, PI / xi, self.reach(), &self.cfg)?;
                Ok(r.value / PI)
            }
        }
    }

    /// `I_S(ξ)`, the integral entering the classical action.
    pub fn action_integral(&self, xi: f64) -> Result<f64> {
        check_time(xi)?;
        if xi == 0.0 {
            return Ok(0.0);
        }
        match self.method {
            Method::Expansion => {
                let sum = self.pole_sum(|p, r| -r / (p * p) * aux_g_regular(p * xi));
                Ok(0.5 * xi + sum / PI)
            }
            Method::Quadrature => {
                let k = &self.kernel;
                let v = self.one_minus_cos(xi, |w| 1.0 / (w * w * k.eval(w)), |w| {
                    let s = (0.5 * w * xi).sin();
                    if w == 0.0 {
                        0.5 * xi * xi
                    } else {
                        2.0 * s * s / (w * w * k.eval(w))
                    }
                })?;
                Ok(v / PI)
            }
        }
    }

    /// `K(t)`; at `t = 0` this is `⟨x²⟩`.
    pub fn correlation(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            return self.fluctuations();
        }
        match self.method {
            Method::Expansion => Ok(self.pole_sum(|p, r| r * aux_pair(p * t).1) / PI),
            Method::Quadrature => {
                let k = &self.kernel;
                let half = PI / t;
                let f = |w: f64| (w * t).cos() / k.eval(w);
                let head = quad::integrate(f, 0.0, 0.5 * half, &self.cfg)?;
                let tail =
                    quad::integrate_oscillatory(f, 0.5 * half, half, self.reach(), &self.cfg)?;
                Ok((head.value + tail.value) / PI)
            }
        }
    }

    /// `K(0) - K(t)`, free of the cancellation in the difference.
    pub fn correlation_drop(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        match self.method {
            Method::Expansion => Ok(-self.pole_sum(|p, r| r * aux_g_regular(p * t)) / PI),
            Method::Quadrature => {
                let k = &self.kernel;
                let v = self.one_minus_cos(t, |w| 1.0 / k.eval(w), |w| {
                    let s = (0.5 * w * t).sin();
                    2.0 * s * s / k.eval(w)
                })?;
                Ok(v / PI)
            }
        }
    }

    /// `⟨x²⟩ = K(0)`.
    pub fn fluctuations(&self) -> Result<f64> {
        match self.method {
            Method::Expansion => Ok(-self.pole_sum(|p, r| r * p.ln()) / PI),
            Method::Quadrature => {
                let k = &self.kernel;
                let w = self.reach();
                let head = quad::integrate_panels(|x| 1.0 / k.eval(x), 0.0, w, 10.0, &self.cfg)?;
                let tail = quad::integrate_tail(|x| 1.0 / k.eval(x), w, &self.cfg)?;
                Ok((head.value + tail.value) / PI)
            }
        }
    }

    /// `∫₀^∞ (1 - cos ωt) h(ω) dω` with `h` decaying at least like `1/ω²`;
    /// `full` is the integrand itself, written without cancellation.
    fn one_minus_cos(
        &self,
        t: f64,
        h: impl Fn(f64) -> f64,
        full: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        let half = PI / t;
        // Start the tail at a zero of cos(ωt) beyond the reach.
        let n = ((self.reach() * t / PI - 0.5).ceil()).max(0.0);
        let w = (n + 0.5) * half;
        let head = quad::integrate_panels(&full, 0.0, w, half, &self.cfg)?;
        let smooth = quad::integrate_tail(&h, w, &self.cfg)?;
        let osc = quad::integrate_oscillatory(
            |x| (x * t).cos() * h(x),
            w,
            half,
            w,
            &self.cfg,
        )?;
        Ok(head.value + smooth.value - osc.value)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time argument must be >= 0, got {t}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Asymmetry;

    fn spectral(g: f64, t: f64, wc: f64, m: Method) -> Spectral {
        let p = ModelParams::new(12.5, Asymmetry::Finite(1.0), g, t, wc).unwrap();
        Spectral::new(&p, &QuadratureConfig::default(), m).unwrap()
    }

    #[test]
    fn bare_closed_forms() {
        let s = spectral(0.0, 0.0, 8000.0, Method::Expansion);
        for xi in [0.01f64, 0.5, 1.0, 3.0, 12.0] {
            let e = (-xi).exp();
            assert!((s.saddle_lhs(xi).unwrap() - 0.5 * (1.0 - e)).abs() < 1e-14);
            let is = 0.5 * xi - 0.5 * (1.0 - e);
            assert!((s.action_integral(xi).unwrap() - is).abs() < 1e-13);
            assert!((s.correlation(xi).unwrap() - 0.5 * e).abs() < 1e-14);
            assert!((s.correlation_drop(xi).unwrap() - 0.5 * (1.0 - e)).abs() < 1e-14);
        }
        assert!((s.fluctuations().unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(s.saddle_lhs(0.0).unwrap(), 0.0);
    }

    #[test]
    fn expansion_matches_quadrature() {
        let e = spectral(0.1, 0.05, 200.0, Method::Expansion);
        let q = spectral(0.1, 0.05, 200.0, Method::Quadrature);
        for xi in [0.05, 1.0, 4.0] {
            let a = e.saddle_lhs(xi).unwrap();
            let b = q.saddle_lhs(xi).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs(), "L {xi}: {a} {b}");
            let a = e.action_integral(xi).unwrap();
            let b = q.action_integral(xi).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs(), "I {xi}: {a} {b}");
            let a = e.correlation(xi).unwrap();
            let b = q.correlation(xi).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs(), "K {xi}: {a} {b}");
            let a = e.correlation_drop(xi).unwrap();
            let b = q.correlation_drop(xi).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs(), "dK {xi}: {a} {b}");
        }
        let a = e.fluctuations().unwrap();
        let b = q.fluctuations().unwrap();
        assert!((a - b).abs() < 1e-9 * a, "{a} {b}");
    }

    #[test]
    fn rejects_negative_time() {
        let s = spectral(0.0, 0.0, 10.0, Method::Expansion);
        assert!(s.saddle_lhs(-1.0).is_err());
    }
}
