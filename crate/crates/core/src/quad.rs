//! Adaptive Gauss–Kronrod quadrature, semi-infinite oscillatory integrals
//! with series acceleration, and bracketed root finding.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::QuadratureConfig;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const MAX_PIECES: usize = 20_000;

/// Globally adaptive 7/15-point Gauss–Kronrod on a finite interval.
///
/// Intervals deeper than `max_depth` bisections are frozen; if the
/// tolerance is still missed the achieved estimate is reported as an error.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
        });
    }
    let (v, e) = kronrod15(&mut f, a, b);
    if !v.is_finite() {
        return Err(Error::numerical("non-finite integrand", f64::NAN));
    }
    let mut heap = BinaryHeap::new();
    let mut frozen_val = 0.0;
    let mut frozen_err = 0.0;
    heap.push(Piece {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    });
    let mut total = v;
    let mut total_err = e;
    let mut count = 1;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        let Some(p) = heap.pop() else { break };
        if p.depth >= cfg.max_depth || count >= MAX_PIECES {
            frozen_val += p.value;
            frozen_err += p.error;
            if count >= MAX_PIECES {
                for q in heap.drain() {
                    frozen_val += q.value;
                    frozen_err += q.error;
                }
                break;
            }
            continue;
        }
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod15(&mut f, p.a, m);
        let (v2, e2) = kronrod15(&mut f, m, p.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::numerical("non-finite integrand", total_err));
        }
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        count += 1;
        heap.push(Piece {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
            depth: p.depth + 1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
            depth: p.depth + 1,
        });
    }
    // Resum to shed accumulated rounding in the running totals.
    let mut value = frozen_val;
    let mut error = frozen_err;
    for p in heap.iter() {
        value += p.value;
        error += p.error;
    }
    let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if error > target && error > 1e-15 * value.abs() * 16.0 {
        return Err(Error::numerical("adaptive quadrature did not converge", error));
    }
    Ok(QuadResult { value, error })
}

/// `∫_W^∞ f(ω) dω` for a non-oscillating integrand decaying faster than `1/ω`,
/// mapped onto `t ∈ (0, 1]` by `ω = W/t`.
pub fn integrate_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    w: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if !(w > 0.0) {
        return Err(Error::domain("tail start must be positive"));
    }
    integrate(
        |t| {
            if t <= 0.0 {
                0.0
            } else {
                let x = w / t;
                f(x) * w / (t * t)
            }
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Sum of adaptive integrals over consecutive panels of `width` covering `[a, b]`.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    width: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    let n = (((b - a) / width).ceil() as usize).max(1);
    let h = (b - a) / n as f64;
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol / n as f64,
        ..*cfg
    };
    let mut out = QuadResult {
        value: 0.0,
        error: 0.0,
    };
    for k in 0..n {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == n { b } else { lo + h };
        let r = integrate(&mut f, lo, hi, &inner)?;
        out.value += r.value;
        out.error += r.error;
    }
    Ok(out)
}

const EULER_PANELS: usize = 30;

/// `∫_start^∞ f(ω) dω` for an integrand oscillating with half-period `half`
/// under a slowly varying envelope; `start` should be a zero of the
/// oscillating factor.
///
/// Panels of width `half` are integrated directly until `reach`, after
/// which the alternating panel sums are accelerated by repeated averaging
/// of the partial sums.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    mut f: F,
    start: f64,
    half: f64,
    reach: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if !(half > 0.0) || !half.is_finite() {
        return Err(Error::domain("oscillation half-period must be positive"));
    }
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        ..*cfg
    };
    let n_direct = (((reach - start) / half).ceil().max(1.0) as usize).min(4_000_000);
    let mut sum = 0.0;
    let mut err = 0.0;
    for k in 0..n_direct {
        let a = start + k as f64 * half;
        let r = integrate(&mut f, a, a + half, &inner)?;
        sum += r.value;
        err += r.error;
    }
    let mut partial = Vec::with_capacity(EULER_PANELS + 1);
    partial.push(sum);
    let mut acc = sum;
    for k in 0..EULER_PANELS {
        let a = start + (n_direct + k) as f64 * half;
        let r = integrate(&mut f, a, a + half, &inner)?;
        acc += r.value;
        err += r.error;
        partial.push(acc);
    }
    // Repeated averaging; the spread of the last level is the tail error.
    let mut level = partial;
    while level.len() > 2 {
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    let value = 0.5 * (level[0] + level[1]);
    err += (level[1] - level[0]).abs();
    Ok(QuadResult { value, error: err })
}

/// Brent's method on a sign-changing bracket.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket {
            what: "brent".into(),
            lo,
            hi,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::numerical("non-finite function in root search", b));
        }
    }
    Err(Error::numerical("brent did not converge", (c - b).abs()))
}

/// Expands `[lo, hi]` geometrically about `lo` until `f` changes sign.
pub fn grow_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    mut hi: f64,
    limit: f64,
) -> Result<(f64, f64)> {
    let flo = f(lo);
    let mut prev = lo;
    while hi <= limit {
        let fh = f(hi);
        if fh.is_finite() && fh.signum() != flo.signum() {
            return Ok((prev, hi));
        }
        prev = hi;
        hi = lo + 2.0 * (hi - lo);
    }
    Err(Error::NoBracket {
        what: "bracket growth".into(),
        lo,
        hi: limit,
    })
}
