//! Partial-fraction decomposition of the bath kernel `1/D(ω)`.
//!
//! The reduced denominator of `1/D` is monic with roots `ω = -p_k`, all
//! with `Re p_k ≥ 0`, so `1/D(ω) = Σ r_k / (ω + p_k)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{KernelDenominator, ModelParams};
use crate::poly;

/// Relative separation below which two poles are treated as coincident.
const DEGENERATE_GAP: f64 = 2e-5;
/// Relative half-split applied to coincident poles.
const DEGENERATE_SPLIT: f64 = 1e-5;

/// Residues of `N(ω) / Π(ω + p_k)` at each simple pole.
pub(crate) fn residues(num: &[f64], poles: &[Complex64]) -> Vec<Complex64> {
    poles
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let mut den = Complex64::new(1.0, 0.0);
            for (j, &pj) in poles.iter().enumerate() {
                if j != k {
                    den *= pj - pk;
                }
            }
            poly::eval_complex(num, -pk) / den
        })
        .collect()
}

/// Poles of a monic real polynomial `Π(ω + p_k)`, sanitized so that purely
/// oscillatory poles sit at `Re p = +0`.
pub(crate) fn poles_of(den: &[f64]) -> Result<Vec<Complex64>> {
    let roots = match den.len() {
        3 => poly::quadratic_roots(den[2], den[1], den[0]).to_vec(),
        4 => {
            let lead = den[3];
            poly::cubic_roots(den[2] / lead, den[1] / lead, den[0] / lead).to_vec()
        }
        _ => poly::roots(den)?,
    };
    Ok(roots
        .into_iter()
        .map(|w| {
            let p = -w;
            let re = if p.re.abs() <= 1e-14 * p.norm() { 0.0 } else { p.re };
            Complex64::new(re, p.im)
        })
        .collect())
}

/// Splits coincident poles symmetrically. Returns true if any were split.
pub(crate) fn split_degenerate(poles: &mut [Complex64]) -> bool {
    let mut any = false;
    for i in 0..poles.len() {
        for j in (i + 1)..poles.len() {
            let scale = poles[i].norm().max(poles[j].norm());
            if (poles[i] - poles[j]).norm() < DEGENERATE_GAP * scale {
                let mid = 0.5 * (poles[i] + poles[j]);
                let dir = if mid.im == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    mid / mid.norm()
                };
                poles[i] = mid - dir * (DEGENERATE_SPLIT * scale);
                poles[j] = mid + dir * (DEGENERATE_SPLIT * scale);
                any = true;
            }
        }
    }
    any
}

/// Roots and partial-fraction data of the kernel denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable {
    cutoff: f64,
    /// `z` with `1/z = 1 + τ_p ω_c`.
    pub z: f64,
    /// Four roots of the cleared quartic, `Λ = p/ω_c`.
    pub lambda: [Complex64; 4],
    /// Partial-fraction coefficients `𝒯_i`; zero for roots cancelled by the numerator.
    pub t_coef: [Complex64; 4],
    /// Surviving poles `p_k` of the reduced form.
    pub poles: Vec<Complex64>,
    /// Residues `r_k` of `1/D` at the surviving poles.
    pub residues: Vec<Complex64>,
    /// Set when coincident poles were split apart.
    pub degenerate: bool,
}

impl RootTable {
    pub fn new(p: &ModelParams) -> Result<Self> {
        Self::from_kernel(&KernelDenominator::new(p))
    }

    pub fn from_kernel(k: &KernelDenominator) -> Result<Self> {
        let wc = k.cutoff();
        let mut poles = poles_of(k.reduced_denominator())?;
        let degenerate = split_degenerate(&mut poles);
        let res = residues(k.reduced_numerator(), &poles);
        let z = 1.0 / (1.0 + k.tau_p() * wc);

        // Each factor cancelled against the numerator is A = ω_c + ω
        // (Bq reduces to A when τ_p = 0), a root at Λ = 1 with no residue.
        let mut lambda = Vec::with_capacity(4);
        let mut t_coef = Vec::with_capacity(4);
        for (pk, rk) in poles.iter().zip(&res) {
            lambda.push(pk / wc);
            t_coef.push(-rk / pk * (z * wc * wc));
        }
        let f = k.factors();
        let cancelled = usize::from(!f.drude) + usize::from(!f.momentum);
        for _ in 0..cancelled {
            lambda.push(Complex64::new(1.0, 0.0));
            t_coef.push(Complex64::new(0.0, 0.0));
        }
        Ok(RootTable {
            cutoff: wc,
            z,
            lambda: lambda.try_into().expect("four roots"),
            t_coef: t_coef.try_into().expect("four coefficients"),
            poles,
            residues: res,
            degenerate,
        })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// `c_k = -r_k/p_k`, the coefficients of `1/(ω D)` beyond the `1/ω` term.
    pub fn c_coef(&self) -> Vec<Complex64> {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(p, r)| -r / p)
            .collect()
    }

    /// `1/D(ω)` from the partial-fraction sum.
    pub fn inverse_kernel(&self, w: Complex64) -> Complex64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(p, r)| r / (w + p))
            .sum()
    }

    /// `𝒯_i` from the closed product formula in the roots `Λ`.
    pub fn t_coef_closed_form(&self) -> [Complex64; 4] {
        let z = self.z;
        std::array::from_fn(|i| {
            let li = self.lambda[i];
            let mut den = li;
            for j in 0..4 {
                if j != i {
                    den *= li - self.lambda[j];
                }
            }
            (z - li * (z + 1.0) + li * li) / den
        })
    }
}

/// Large-cutoff approximations of the four roots `Λ_i`.
pub fn approximate_roots(gamma: f64, tau_p: f64, cutoff: f64) -> [Complex64; 4] {
    let sigma2 = gamma * tau_p;
    let sigma = sigma2.sqrt();
    let pp = 0.5 * (gamma + tau_p);
    let pm = 0.5 * (gamma - tau_p);
    let eps = 1.0 / cutoff;
    let disc = Complex64::new(pm * pm - 1.0, 0.0).sqrt();
    let base = eps / (1.0 + sigma2);
    let l1 = (pp + disc) * base;
    let l2 = (pp - disc) * base;
    let shift = eps * pp / (1.0 + sigma2);
    let l3 = Complex64::new(1.0 - shift, sigma * (1.0 + shift));
    [l1, l2, l3, l3.conj()]
}
