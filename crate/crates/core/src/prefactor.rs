//! Fluctuation prefactor: determinant ratio from scattering phases, the
//! negative eigenvalue of the breathing mode and the Jacobian norm.
//!
//! Frequencies are scaled as `x = ω/ω_c`. With `N(x) = 1 + (1 + τ_p ω_c) x`
//! the free Green function at eigenvalue `λ` is
//!
//! ```text
//! G_λ(τ) = (1/(π ω_c)) ∫₀^∞ N(x) cos(x ω_c τ) / (P_λ(x) - i0) dx
//! P_λ(x) = x³ + α x² + χ x - p² Ω_c²,   p² = λ - 1,   Ω_c = 1/ω_c
//! ```
//!
//! The position bath enters without its cutoff here; only the momentum
//! cutoff keeps the determinant ratio finite.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bounce::{bare_bounce_time, solve_bounce_time_with};
use crate::error::{Error, Result};
use crate::model::{Asymmetry, ModelParams, QuadratureConfig};
use crate::path::kinetic_norm_with;
use crate::poly;
use crate::quad;
use crate::roots::split_degenerate;
use crate::spectral::{Method, Spectral};
use crate::specfun::{aux_g_pv, aux_g_regular, aux_pair};

type C64 = Complex64;

/// Cubic roots and partial-fraction coefficients at one eigenvalue.
///
/// The roots of `P_λ` are written `x̃₁ = ν₁`, `x̃₂ = -ν₂`, `x̃₃ = -ν₃` when
/// `λ > 1` (the on-shell case, `ν₁ > 0`), and `x̃ᵢ = -νᵢ` for all three
/// otherwise. `Ũᵢ` is the residue of `N/P_λ` at `x̃ᵢ`. The `k`, `𝒯̃` pair is
/// the same construction at `λ = 0` with `x̃ᵢ = -kᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenRootTable {
    pub lambda: f64,
    pub p2: f64,
    pub omega_c: f64,
    pub alpha: f64,
    /// `χ(-p²)`
    pub chi: f64,
    pub nu: [C64; 3],
    pub u_coef: [C64; 3],
    pub k: [C64; 3],
    pub t_coef: [C64; 3],
    pub on_shell: bool,
    pub degenerate: bool,
}

/// Coefficients of `P_λ` and `N` for one set of couplings.
#[derive(Debug, Clone, Copy)]
struct Cubic {
    cutoff: f64,
    gamma: f64,
    tau_p: f64,
}

/// Roots `x̃` of `P_λ`, residues of `N/P_λ` there, and the split flag.
struct Expansion {
    roots: [C64; 3],
    res: [C64; 3],
    on_shell: bool,
    degenerate: bool,
}

impl Cubic {
    fn new(p: &ModelParams) -> Self {
        Cubic {
            cutoff: p.cutoff_w(),
            gamma: p.gamma(),
            tau_p: p.tau_p(),
        }
    }

    fn alpha(&self) -> f64 {
        self.gamma / self.cutoff + self.tau_p * self.gamma + 1.0
    }

    fn chi(&self, p2: f64) -> f64 {
        let oc = 1.0 / self.cutoff;
        -p2 * oc * oc * (1.0 + self.tau_p * self.cutoff) + self.gamma / self.cutoff
    }

    /// `[c₀, c₁, c₂, 1]` of `P_λ`.
    fn coeffs(&self, lambda: f64) -> [f64; 4] {
        let p2 = lambda - 1.0;
        let oc = 1.0 / self.cutoff;
        [-p2 * oc * oc, self.chi(p2), self.alpha(), 1.0]
    }

    fn numerator(&self) -> [f64; 2] {
        [1.0, 1.0 + self.tau_p * self.cutoff]
    }

    fn expand(&self, lambda: f64) -> Result<Expansion> {
        if lambda == 1.0 {
            return Err(Error::domain("Green function is singular at the threshold"));
        }
        let c = self.coeffs(lambda);
        let mut roots = poly::cubic_roots(c[2], c[1], c[0]);
        let on_shell = lambda > 1.0;
        if on_shell {
            // Exactly one positive real root; move it to the front.
            let i = (0..3)
                .filter(|&i| roots[i].im == 0.0)
                .max_by(|&a, &b| roots[a].re.total_cmp(&roots[b].re))
                .ok_or_else(|| Error::numerical("on-shell root", f64::NAN))?;
            if !(roots[i].re > 0.0) {
                return Err(Error::numerical("on-shell root", roots[i].re));
            }
            roots.swap(0, i);
        }
        let degenerate = split_degenerate(&mut roots);
        let num = self.numerator();
        let mut res = [C64::new(0.0, 0.0); 3];
        for i in 0..3 {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..3 {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            res[i] = poly::eval_complex(&num, roots[i]) / den;
        }
        Ok(Expansion {
            roots,
            res,
            on_shell,
            degenerate,
        })
    }
}

impl Expansion {
    /// `(ν, Ũ)` pairs for the off-shell terms `Ũ/(x + ν)`.
    fn off_shell(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        let skip = usize::from(self.on_shell);
        (skip..3).map(move |i| (sanitize(-self.roots[i]), self.res[i]))
    }

    fn on_shell_pair(&self) -> Option<(f64, f64)> {
        self.on_shell.then(|| (self.roots[0].re, self.res[0].re))
    }

    /// `π ω_c G(τ)` split into real and imaginary parts, `T = ω_c τ > 0`.
    fn green_scaled(&self, t: f64) -> C64 {
        let mut re: f64 = self.off_shell().map(|(nu, u)| (u * aux_pair(nu * t).1).re).sum();
        let mut im = 0.0;
        if let Some((nu1, u1)) = self.on_shell_pair() {
            let w = nu1 * t;
            re += u1 * aux_g_pv(w);
            im = PI * u1 * w.cos();
        }
        C64::new(re, im)
    }

    /// `π ω_c G(0)`.
    fn green_scaled_origin(&self) -> C64 {
        let mut re: f64 = self.off_shell().map(|(nu, u)| -(u * nu.ln()).re).sum();
        let mut im = 0.0;
        if let Some((nu1, u1)) = self.on_shell_pair() {
            re -= u1 * nu1.ln();
            im = PI * u1;
        }
        C64::new(re, im)
    }

    /// `π ω_c (G(0) - G(τ))`, free of the cancellation in the difference.
    fn green_scaled_drop(&self, t: f64) -> C64 {
        let mut re: f64 = self
            .off_shell()
            .map(|(nu, u)| -(u * aux_g_regular(nu * t)).re)
            .sum();
        let mut im = 0.0;
        if let Some((nu1, u1)) = self.on_shell_pair() {
            let w = nu1 * t;
            re += u1 * (-aux_g_regular(C64::new(w, 0.0)).re + PI * w.sin());
            im = PI * u1 * (1.0 - w.cos());
        }
        C64::new(re, im)
    }
}

/// Clears a roundoff-level real part so roots on the imaginary axis use
/// the `Re -> 0⁺` limit of the auxiliary functions.
fn sanitize(nu: C64) -> C64 {
    if nu.re.abs() <= 1e-14 * nu.norm() {
        C64::new(0.0, nu.im)
    } else {
        nu
    }
}

impl GreenRootTable {
    pub fn new(p: &ModelParams, lambda: f64) -> Result<Self> {
        let c = Cubic::new(p);
        let e = c.expand(lambda)?;
        let z = c.expand(0.0)?;
        let nu = std::array::from_fn(|i| {
            if e.on_shell && i == 0 {
                e.roots[0]
            } else {
                -e.roots[i]
            }
        });
        Ok(GreenRootTable {
            lambda,
            p2: lambda - 1.0,
            omega_c: 1.0 / c.cutoff,
            alpha: c.alpha(),
            chi: c.chi(lambda - 1.0),
            nu,
            u_coef: e.res,
            k: z.roots.map(|r| -r),
            t_coef: z.res,
            on_shell: e.on_shell,
            degenerate: e.degenerate || z.degenerate,
        })
    }

    /// Roots `x̃` of `P_λ` in the original sign convention.
    pub fn signed_roots(&self) -> [C64; 3] {
        std::array::from_fn(|i| {
            if self.on_shell && i == 0 {
                self.nu[0]
            } else {
                -self.nu[i]
            }
        })
    }

    /// `[c₀, c₁, c₂, 1]` of `P_λ`.
    pub fn polynomial(&self) -> [f64; 4] {
        [-self.p2 * self.omega_c * self.omega_c, self.chi, self.alpha, 1.0]
    }
}

/// `G_λ(τ)`, retarded, in units of `1/(m ω₀²)`.
pub fn green_function(p: &ModelParams, lambda: f64, tau: f64) -> Result<C64> {
    if !lambda.is_finite() || !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::domain("green function needs finite lambda and tau >= 0"));
    }
    let c = Cubic::new(p);
    let e = c.expand(lambda)?;
    let t = c.cutoff * tau;
    let v = if t == 0.0 {
        e.green_scaled_origin()
    } else {
        e.green_scaled(t)
    };
    Ok(v / (PI * c.cutoff))
}

/// `U⁻¹ = |ẋ_cl(ξ_B/2)| / x_m`, which equals `G₀(0) - G₀(ξ_B)`.
pub fn u_inverse(p: &ModelParams, xi_b: f64) -> Result<f64> {
    if !(xi_b > 0.0) || !xi_b.is_finite() {
        return Err(Error::domain("u_inverse needs a finite bounce time > 0"));
    }
    let c = Cubic::new(p);
    Ok(c.expand(0.0)?.green_scaled_drop(c.cutoff * xi_b).re / (PI * c.cutoff))
}

/// Everything the phases need at fixed couplings and bounce time.
struct Scattering {
    cubic: Cubic,
    xi: f64,
    u_inv: f64,
}

impl Scattering {
    fn new(p: &ModelParams, xi_b: f64) -> Result<Self> {
        let u_inv = u_inverse(p, xi_b)?;
        Ok(Scattering {
            cubic: Cubic::new(p),
            xi: xi_b,
            u_inv,
        })
    }

    /// `(G(0), G(0) - G(ξ))`.
    fn greens(&self, lambda: f64) -> Result<(C64, C64, Expansion)> {
        let e = self.cubic.expand(lambda)?;
        let s = 1.0 / (PI * self.cubic.cutoff);
        let g0 = e.green_scaled_origin() * s;
        let drop = e.green_scaled_drop(self.cubic.cutoff * self.xi) * s;
        Ok((g0, drop, e))
    }

    /// `(n⁺, n⁻) = U⁻¹ - G(0) ∓ G(ξ)`.
    fn n_pm(&self, lambda: f64) -> Result<(C64, C64)> {
        let (g0, drop, _) = self.greens(lambda)?;
        let u = C64::new(self.u_inv, 0.0);
        Ok((u - 2.0 * g0 + drop, u - drop))
    }

    fn phases(&self, lambda: f64) -> Result<(f64, f64)> {
        if lambda == 1.0 {
            return Ok(self.threshold());
        }
        let (np, nm) = self.n_pm(lambda)?;
        Ok((lower_arg(np), lower_arg(nm)))
    }

    /// One-sided limits at `λ = 1⁺`. With `γ > 0` the on-shell weight stays
    /// finite while `Re G(0)` grows logarithmically, so both tend to `-π`.
    /// With `γ = 0`, `Im G(0)` diverges like `1/(2p)`: the even channel
    /// carries a half-bound state and `φ⁺` tends to `-π/2`.
    fn threshold(&self) -> (f64, f64) {
        if self.cubic.gamma > 0.0 {
            (-PI, -PI)
        } else {
            (-0.5 * PI, -PI)
        }
    }

    /// `φ⁺ + φ⁻` averaged over the fast on-shell oscillation, `2 arg(U⁻¹ - G(0))`.
    fn averaged_sum(&self, lambda: f64) -> Result<f64> {
        let e = self.cubic.expand(lambda)?;
        let g0 = e.green_scaled_origin() / (PI * self.cubic.cutoff);
        Ok(2.0 * lower_arg(C64::new(self.u_inv, 0.0) - g0))
    }

    /// `(θ, dθ/du, R, Θ)` with `θ = ν₁ ω_c ξ` and `λ = 1 + u²`, where the
    /// fast part of `φ⁺ + φ⁻` is `-Σ R^k sin(kΘ)/k`.
    fn oscillation(&self, u: f64) -> Result<(f64, f64, f64, f64)> {
        let (g0, _, e) = self.greens(1.0 + u * u)?;
        let (nu1, u1) = e
            .on_shell_pair()
            .ok_or_else(|| Error::numerical("on-shell root", u))?;
        let wc = self.cubic.cutoff;
        let theta = nu1 * wc * self.xi;
        // dν₁ω_c/dλ = Ũ₁/ω_c
        let dtheta = self.xi * (u1 / wc) * 2.0 * u;
        let m = C64::new(self.u_inv, 0.0) - g0;
        let amp = (u1 / wc) * (u1 / wc) / m.norm_sqr();
        let big = 2.0 * theta + PI - 2.0 * m.arg();
        Ok((theta, dtheta, amp, big))
    }
}

/// `arg z` on `[-π, 0]`; the scattering amplitudes have `Im ≤ 0`, so a
/// positive imaginary part is roundoff.
fn lower_arg(z: C64) -> f64 {
    let im = if z.im >= 0.0 { -0.0 } else { z.im };
    im.atan2(z.re)
}

/// `(φ⁺, φ⁻)` at `λ ≥ 1` (units of `m ω₀²`). At `λ = 1` the one-sided limit
/// is returned.
pub fn phases(p: &ModelParams, lambda: f64, xi_b: f64) -> Result<(f64, f64)> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::domain("phases need lambda >= 1"));
    }
    Scattering::new(p, xi_b)?.phases(lambda)
}

/// Largest allowed jump between neighbouring samples of a phase curve.
const MAX_JUMP: f64 = PI;

/// Phases on a sorted grid of `λ ≥ 1`, refined between samples that jump
/// by more than `π/2`. A jump above `π` that survives refinement is an error.
pub fn phase_curve(p: &ModelParams, lambdas: &[f64], xi_b: f64) -> Result<Vec<(f64, f64)>> {
    let sc = Scattering::new(p, xi_b)?;
    let mut out = Vec::with_capacity(lambdas.len());
    for (i, &l) in lambdas.iter().enumerate() {
        if !(l >= 1.0) {
            return Err(Error::domain("phases need lambda >= 1"));
        }
        let cur = sc.phases(l)?;
        if i > 0 {
            let prev_l = lambdas[i - 1];
            if l < prev_l {
                return Err(Error::domain("phase grid must be sorted"));
            }
            check_continuity(&sc, prev_l, out[i - 1], l, cur, 0)?;
        }
        out.push(cur);
    }
    Ok(out)
}

fn check_continuity(
    sc: &Scattering,
    l0: f64,
    f0: (f64, f64),
    l1: f64,
    f1: (f64, f64),
    depth: u32,
) -> Result<()> {
    let jump = (f1.0 - f0.0).abs().max((f1.1 - f0.1).abs());
    if jump <= 0.5 * PI {
        return Ok(());
    }
    if depth >= 30 || l1 - l0 <= 1e-12 * l1 {
        if jump > MAX_JUMP {
            return Err(Error::numerical("phase branch tracking", jump));
        }
        return Ok(());
    }
    let mid = 0.5 * (l0 + l1);
    let fm = sc.phases(mid)?;
    check_continuity(sc, l0, f0, mid, fm, depth + 1)?;
    check_continuity(sc, mid, fm, l1, f1, depth + 1)
}

/// Phase sum below which the λ-integral is truncated.
const PHASE_FLOOR: f64 = 1e-6;
const U_CEILING: f64 = 1e12;
/// Smallest `u θ'(u)` at which the fast oscillation is averaged analytically.
const MIN_OSCILLATIONS: f64 = 400.0;

/// `ln R = -(1/2π) ∫₁^∞ (φ⁺ + φ⁻)/λ dλ` in units where `m ω₀² = 1`.
pub fn determinant_ratio(p: &ModelParams, xi_b: f64) -> Result<f64> {
    determinant_ratio_with(&Scattering::new(p, xi_b)?, &QuadratureConfig::default())
}

fn determinant_ratio_with(sc: &Scattering, cfg: &QuadratureConfig) -> Result<f64> {
    // λ = 1 + u², dλ/λ = 2u du/(1 + u²).
    let weight = |u: f64| 2.0 * u / (1.0 + u * u);
    let mut first_err = None;
    let mut exact = |u: f64| match sc.phases(1.0 + u * u) {
        Ok((a, b)) => weight(u) * (a + b),
        Err(e) => {
            first_err.get_or_insert(e);
            0.0
        }
    };
    let cfg_loose = QuadratureConfig {
        rel_tol: cfg.rel_tol.max(1e-9),
        abs_tol: cfg.abs_tol.max(1e-12),
        ..*cfg
    };

    // Near threshold the phases vary on the scale u ~ γ; log spacing in u.
    let mut total = 0.0;
    let mut lo: f64 = 1e-9;
    while lo < 1.0 {
        let hi = (lo * 10.0).min(1.0);
        total += quad::integrate(&mut exact, lo, hi, &cfg_loose)?.value;
        lo = hi;
    }

    // Exact integrand up to the switch point, panels shorter than a half period.
    let switch = switch_point(sc)?;
    let mut u = 1.0;
    while u < switch {
        let (_, dtheta, _, _) = sc.oscillation(u)?;
        let width = (PI / dtheta.max(1e-300)).min(0.5);
        let hi = (u + width).min(switch);
        total += quad::integrate(&mut exact, u, hi, &cfg_loose)?.value;
        u = hi;
    }
    if let Some(e) = first_err {
        return Err(e);
    }

    // Endpoint term of the fast part discarded beyond the switch point:
    // ∫_U^∞ w Σ -(R^k/k) sin(kΘ) du ≈ -(w/(2θ')) Σ R^k cos(kΘ)/k².
    let (_, dtheta, amp, big) = sc.oscillation(switch)?;
    let mut li2 = 0.0;
    let mut rk = 1.0;
    for k in 1..200 {
        rk *= amp;
        if rk < 1e-18 {
            break;
        }
        let kf = k as f64;
        li2 += rk * (kf * big).cos() / (kf * kf);
    }
    total -= weight(switch) / (2.0 * dtheta) * li2;

    // Averaged integrand on a log grid in u until the phases are negligible.
    let mut err = None;
    let mut avg = |t: f64| {
        let u = t.exp();
        match sc.averaged_sum(1.0 + u * u) {
            Ok(s) => weight(u) * u * s,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let mut u = switch;
    loop {
        let hi = u * 10.0;
        total += quad::integrate(&mut avg, u.ln(), hi.ln(), &cfg_loose)?.value;
        u = hi;
        let tail = sc.averaged_sum(1.0 + u * u)?;
        if tail.abs() < PHASE_FLOOR || u >= U_CEILING {
            // Φ ∝ 1/u from here on: ∫_U^∞ (2/u) Φ du = 2Φ(U).
            total += 2.0 * tail;
            break;
        }
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok(-total / (2.0 * PI))
}

/// First `u ≥ 4` on a geometric grid where the on-shell phase turns fast
/// enough for the analytic average.
fn switch_point(sc: &Scattering) -> Result<f64> {
    let mut u = 4.0;
    loop {
        let (_, dtheta, _, _) = sc.oscillation(u)?;
        if u * dtheta >= MIN_OSCILLATIONS || u >= 1e6 {
            return Ok(u);
        }
        u *= 1.25;
    }
}

const MU_LIMIT: f64 = 1e8;

/// `|λ₁|` solving `U⁻¹ = G_{-|λ₁|}(0) + G_{-|λ₁|}(ξ_B)`.
pub fn negative_eigenvalue(p: &ModelParams, xi_b: f64) -> Result<f64> {
    if p.is_sharp() {
        return Err(Error::domain("negative eigenvalue needs a finite asymmetry"));
    }
    negative_eigenvalue_with(&Scattering::new(p, xi_b)?)
}

fn negative_eigenvalue_with(sc: &Scattering) -> Result<f64> {
    let mut first_err = None;
    let mut f = |mu: f64| match sc.n_pm(-mu) {
        Ok((np, _)) => np.re,
        Err(e) => {
            first_err.get_or_insert(e);
            f64::NAN
        }
    };
    let guess = bare_negative_eigenvalue(sc.xi).unwrap_or(1.0).max(1e-6);
    let (lo, hi) = quad::grow_bracket(&mut f, 0.0, guess, MU_LIMIT).map_err(|_| {
        Error::NoBracket {
            what: "negative eigenvalue".into(),
            lo: 0.0,
            hi: MU_LIMIT,
        }
    })?;
    let mu = quad::brent(&mut f, lo, hi, 1e-14 * hi)?;
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(mu)
}

/// Zero-coupling `|λ₁|` from `(1 - e^{-ξ})/2 = (1 + e^{-κξ})/(2κ)`, `κ² = 1 + |λ₁|`.
pub fn bare_negative_eigenvalue(xi: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::domain("bare negative eigenvalue needs xi > 0"));
    }
    let lhs = 0.5 * -(-xi).exp_m1();
    let f = |mu: f64| {
        let kappa = (1.0 + mu).sqrt();
        lhs - (1.0 + (-kappa * xi).exp()) / (2.0 * kappa)
    };
    let (lo, hi) = quad::grow_bracket(f, 0.0, 1e-3, MU_LIMIT)?;
    quad::brent(f, lo, hi, 1e-15 * hi)
}

/// Zero-coupling `∫ ẋ² dτ = (a² s²/2)(1 - e^{-ξ}(1 + ξ))`.
pub fn bare_kinetic_norm(p: &ModelParams) -> Result<f64> {
    let v = match p.sigma_ratio() {
        Asymmetry::Finite(v) => v,
        Asymmetry::Infinite => return Err(Error::domain("needs a finite asymmetry")),
    };
    let xi = bare_bounce_time(v);
    let xm = p.flat_edge();
    Ok(0.5 * xm * xm * -((-xi).exp_m1() + xi * (-xi).exp()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorResult {
    pub xi_b: f64,
    pub ln_r: f64,
    /// `|λ₁|` in units of `m ω₀²`.
    pub lambda1: f64,
    /// `A_τ₀ = (∫ ẋ² dτ)^{-1/2}`.
    pub a_tau0: f64,
    pub ln_r_bare: f64,
    pub lambda1_bare: f64,
    pub a_tau0_bare: f64,
    /// `K/K₀ = (A₀/A)(R/R₀)√(|λ₁⁰|/|λ₁|)`.
    pub k_ratio: f64,
    pub warnings: Vec<String>,
}

impl PrefactorResult {
    pub fn r_ratio(&self) -> f64 {
        (self.ln_r - self.ln_r_bare).exp()
    }
}

/// Assembles `K/K₀`. The bare reference uses the closed forms for `A₀` and
/// `|λ₁⁰|` and the same phase integral for `R₀`.
pub fn prefactor_k(p: &ModelParams, q: &QuadratureConfig, m: Method) -> Result<PrefactorResult> {
    if p.is_sharp() {
        return Err(Error::domain("prefactor needs a finite asymmetry"));
    }
    let sp = Spectral::new(p, q, m)?;
    let xi_b = solve_bounce_time_with(&sp, p)?;
    let norm = kinetic_norm_with(&sp, p, xi_b)?;
    let sc = Scattering::new(p, xi_b)?;
    let ln_r = determinant_ratio_with(&sc, q)?;
    let lambda1 = negative_eigenvalue_with(&sc)?;

    let bare = p.uncoupled();
    let xi0 = solve_bounce_time_with(&Spectral::new(&bare, q, m)?, &bare)?;
    let ln_r_bare = determinant_ratio_with(&Scattering::new(&bare, xi0)?, q)?;
    let lambda1_bare = bare_negative_eigenvalue(xi0)?;
    let norm_bare = bare_kinetic_norm(p)?;

    let mut warnings = p.advisories();
    if sc.cubic.expand(0.0)?.degenerate {
        warnings.push("coincident Green-function roots were split".into());
    }
    let ln_k = 0.5 * (norm / norm_bare).ln() + (ln_r - ln_r_bare)
        + 0.5 * (lambda1_bare / lambda1).ln();
    if !(lambda1 > 0.0) {
        return Err(Error::numerical("negative eigenvalue", lambda1));
    }
    Ok(PrefactorResult {
        xi_b,
        ln_r,
        lambda1,
        a_tau0: 1.0 / norm.sqrt(),
        ln_r_bare,
        lambda1_bare,
        a_tau0_bare: 1.0 / norm_bare.sqrt(),
        k_ratio: ln_k.exp(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: f64, g: f64, t: f64, wc: f64) -> ModelParams {
        ModelParams::new(12.5, Asymmetry::Finite(v), g, t, wc).unwrap()
    }

    #[test]
    fn bare_green_function() {
        let p = params(1.0, 0.0, 0.0, 8000.0);
        for tau in [0.0, 0.3, 2.0] {
            let g = green_function(&p, 0.0, tau).unwrap();
            assert!((g.re - 0.5 * (-tau).exp()).abs() < 1e-12, "{g}");
            assert!(g.im.abs() < 1e-15);
            let pp = 0.5f64;
            let g = green_function(&p, 1.0 + pp * pp, tau).unwrap();
            let want = C64::new(0.0, 1.0) * C64::new(0.0, pp * tau).exp() / (2.0 * pp);
            assert!((g - want).norm() < 1e-12, "{g} {want}");
        }
    }

    #[test]
    fn bare_u_inverse() {
        let p = params(1.0, 0.0, 0.0, 8000.0);
        let xi = 1.3;
        let u = u_inverse(&p, xi).unwrap();
        assert!((u - 0.5 * (1.0 - (-xi).exp())).abs() < 1e-13);
    }

    #[test]
    fn bare_negative_eigenvalue_matches_green_solve() {
        let p = params(3.0, 0.0, 0.0, 8000.0);
        let xi = 3f64.ln();
        let a = negative_eigenvalue(&p, xi).unwrap();
        let b = bare_negative_eigenvalue(xi).unwrap();
        assert!((a - b).abs() < 1e-8 * b, "{a} {b}");
    }

    #[test]
    fn phases_decay() {
        let p = params(1.0, 0.1, 0.05, 8000.0);
        let (a, b) = phases(&p, 1e10, 1.0).unwrap();
        assert!(a.abs() < 0.01 && b.abs() < 0.01, "{a} {b}");
        let (a, b) = phases(&p, 1.0, 1.0).unwrap();
        assert_eq!((a, b), (-PI, -PI));
    }
}
