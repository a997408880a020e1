//! Sine and cosine integrals and the auxiliary functions
//!
//! ```text
//! f(w) = ∫₀^∞ sin(u) / (w + u) du,     g(w) = ∫₀^∞ cos(u) / (w + u) du
//! ```
//!
//! on the closed right half plane. Both come from the scaled exponential
//! integral `h(w) = e^{-iw} E₁(-iw) = g(w) + i f(w)` (for real `w`).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::EULER_GAMMA;

const SERIES_LOSS_LIMIT: f64 = 6.0;
const ASYMPTOTIC_RADIUS: f64 = 40.0;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Σ_{k≥1} (-z)^k / (k·k!)`, so that `E₁(z) = -C - ln z - tail(z)`.
fn e1_power_tail(z: Complex64) -> Complex64 {
    let mut term = c64(1.0, 0.0);
    let mut sum = c64(0.0, 0.0);
    for k in 1..400 {
        let kf = k as f64;
        term *= -z / kf;
        let add = term / kf;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn e1_scaled_cf(z: Complex64) -> Option<Complex64> {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = c64(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..20000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (d * an + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return Some(h);
        }
    }
    None
}

fn e1_scaled_asymptotic(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let mut term = inv;
    let mut sum = inv;
    let mut last = term.norm();
    for k in 1..200 {
        let next = -term * (k as f64) * inv;
        let nn = next.norm();
        if nn >= last {
            break;
        }
        sum += next;
        term = next;
        last = nn;
        if nn <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `e^z E₁(z)` on the principal branch.
///
/// On the negative real axis the sign of `z.im` (including a signed zero)
/// selects the side of the cut.
pub fn e1_scaled(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r >= ASYMPTOTIC_RADIUS {
        return e1_scaled_asymptotic(z);
    }
    if r + z.re < SERIES_LOSS_LIMIT || r < 1.0 {
        let e1 = -EULER_GAMMA - z.ln() - e1_power_tail(z);
        return z.exp() * e1;
    }
    match e1_scaled_cf(z) {
        Some(v) => v,
        None => z.exp() * (-EULER_GAMMA - z.ln() - e1_power_tail(z)),
    }
}

/// Exponential integral `E₁(z)`, principal branch.
pub fn e1(z: Complex64) -> Complex64 {
    (-z).exp() * e1_scaled(z)
}

fn sin_integral_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..200 {
        let n = (2 * k) as f64;
        term *= -x2 / (n * (n + 1.0));
        let add = term / (n + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn cos_integral_series_tail(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let n = (2 * k) as f64;
        term *= -x2 / ((n - 1.0) * n);
        let add = term / n;
        sum += add;
        if add.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// `(f(x), g(x))` for real `x > 0` through the exponential integral.
fn aux_real(x: f64) -> (f64, f64) {
    let h = e1_scaled(c64(0.0, -x));
    (h.im, h.re)
}

/// `Si(x) = ∫₀ˣ sin t / t dt`, odd in `x`.
pub fn sin_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sin_integral(-x);
    }
    if x < 4.0 {
        return sin_integral_series(x);
    }
    let (f, g) = aux_real(x);
    FRAC_PI_2 - f * x.cos() - g * x.sin()
}

/// `Ci(x) = C + ln x + ∫₀ˣ (cos t - 1)/t dt` for `x > 0`.
pub fn cos_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("cosine integral needs x > 0, got {x}")));
    }
    if x < 4.0 {
        return Ok(EULER_GAMMA + x.ln() + cos_integral_series_tail(x));
    }
    let (f, g) = aux_real(x);
    Ok(f * x.sin() - g * x.cos())
}

fn check_half_plane(w: Complex64) -> Result<()> {
    if !(w.re > 0.0) || !w.im.is_finite() {
        return Err(Error::domain(format!(
            "auxiliary functions need Re(z) > 0, got {w}"
        )));
    }
    Ok(())
}

/// `f(z) = ∫₀^∞ sin u / (z + u) du` for `Re z > 0`.
pub fn aux_f(z: Complex64) -> Result<Complex64> {
    check_half_plane(z)?;
    Ok(aux_pair(z).0)
}

/// `g(z) = ∫₀^∞ cos u / (z + u) du` for `Re z > 0`.
pub fn aux_g(z: Complex64) -> Result<Complex64> {
    check_half_plane(z)?;
    Ok(aux_pair(z).1)
}

/// `(f(w), g(w))` on `Re w ≥ 0`, `w ≠ 0`. Points on the imaginary axis
/// are the limits taken from `Re w > 0`.
pub(crate) fn aux_pair(w: Complex64) -> (Complex64, Complex64) {
    // -i w and i w; with w.re = +0 the imaginary parts become -0 and +0,
    // which picks the side of the E₁ branch cut matching Re w -> 0+.
    let zp = c64(w.im, -w.re);
    let zm = c64(-w.im, w.re);
    let hp = e1_scaled(zp);
    let hm = e1_scaled(zm);
    let f = (hp - hm) / c64(0.0, 2.0);
    let g = (hp + hm) * 0.5;
    (f, g)
}

/// Small-argument pieces shared by the shifted/regularized forms:
/// returns `(e^{-iw} tail(-iw), e^{iw} tail(iw))`.
fn tails(w: Complex64) -> (Complex64, Complex64) {
    let zp = c64(w.im, -w.re);
    let zm = c64(-w.im, w.re);
    (zp.exp() * e1_power_tail(zp), zm.exp() * e1_power_tail(zm))
}

const SMALL_ARG: f64 = 2.0;

/// `f(w) - π/2`, accurate as `w -> 0`.
pub(crate) fn aux_f_shifted(w: Complex64) -> Complex64 {
    if w.norm() > SMALL_ARG {
        return aux_pair(w).0 - FRAC_PI_2;
    }
    let (tp, tm) = tails(w);
    let lw = EULER_GAMMA + w.ln();
    w.sin() * lw + FRAC_PI_2 * (w.cos() - 1.0) - (tp - tm) / c64(0.0, 2.0)
}

/// `g(w) + C + ln w`, accurate as `w -> 0`.
pub(crate) fn aux_g_regular(w: Complex64) -> Complex64 {
    if w.norm() > SMALL_ARG {
        return aux_pair(w).1 + EULER_GAMMA + w.ln();
    }
    let (tp, tm) = tails(w);
    let lw = EULER_GAMMA + w.ln();
    (1.0 - w.cos()) * lw + FRAC_PI_2 * w.sin() - (tp + tm) * 0.5
}

/// Principal-value companion of `g` for a pole on the positive real axis:
/// `PV ∫₀^∞ cos u / (u - w) du = g(w) - π sin w` for real `w > 0`.
pub(crate) fn aux_g_pv(w: f64) -> f64 {
    aux_pair(c64(w, 0.0)).1.re - PI * w.sin()
}
