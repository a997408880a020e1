//! Real-coefficient polynomials: evaluation, products and complex roots.
//!
//! Coefficients are stored in ascending order, `c[0] + c[1] x + ...`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

pub fn eval_complex(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &v)| k as f64 * v)
        .collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) + b.get(k).copied().unwrap_or(0.0))
        .collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|v| v * s).collect()
}

/// Drops trailing (highest-order) zero coefficients.
pub fn trim(mut c: Vec<f64>) -> Vec<f64> {
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    c
}

/// Relative residual `|p(z)| / sum |c_k| |z|^k`.
pub fn relative_residual(c: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let scale: f64 = c
        .iter()
        .rev()
        .fold(0.0, |acc, &k| acc * r + k.abs());
    if scale == 0.0 {
        return 0.0;
    }
    eval_complex(c, z).norm() / scale
}

/// All complex roots via Aberth-Ehrlich iteration followed by Newton polishing.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let c = trim(coeffs.to_vec());
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::domain("polynomial with zero leading coefficient"));
    }
    let monic: Vec<f64> = c.iter().map(|v| v / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-monic[0], 0.0)]);
    }
    let dc = derivative(&monic);

    // Starting radii: geometric mean of the root magnitudes spread over a
    // Cauchy-type bound.
    let bound = 1.0
        + monic[..n]
            .iter()
            .map(|v| v.abs())
            .fold(0.0_f64, f64::max);
    let r0 = monic[0].abs().powf(1.0 / n as f64).max(1e-300);
    let radius = r0.min(bound);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            let rk = radius * (1.0 + 0.1 * k as f64);
            Complex64::from_polar(rk, th)
        })
        .collect();

    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let p = eval_complex(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let dp = eval_complex(&dc, z[i]);
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += 1.0 / d;
                    }
                }
            }
            let step = ratio / (1.0 - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    for zi in z.iter_mut() {
        *zi = newton_polish(&monic, &dc, *zi);
    }
    let worst = z
        .iter()
        .map(|&zi| relative_residual(&monic, zi))
        .fold(0.0_f64, f64::max);
    if !converged && worst > 1e-10 {
        return Err(Error::numerical("polynomial root iteration", worst));
    }
    clean_conjugates(&mut z);
    Ok(z)
}

fn newton_polish(c: &[f64], dc: &[f64], mut z: Complex64) -> Complex64 {
    let mut best = relative_residual(c, z);
    for _ in 0..4 {
        let d = eval_complex(dc, z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - eval_complex(c, z) / d;
        let res = relative_residual(c, next);
        if !(res < best) {
            break;
        }
        best = res;
        z = next;
    }
    z
}

/// Snaps nearly-real roots onto the real axis and makes complex roots
/// exact conjugate pairs.
fn clean_conjugates(z: &mut [Complex64]) {
    let n = z.len();
    let mut paired = vec![false; n];
    for i in 0..n {
        if paired[i] {
            continue;
        }
        if z[i].im.abs() <= 1e-14 * z[i].norm() {
            z[i].im = 0.0;
            paired[i] = true;
            continue;
        }
        let target = z[i].conj();
        let mut best: Option<(usize, f64)> = None;
        for j in (i + 1)..n {
            if paired[j] {
                continue;
            }
            let d = (z[j] - target).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, d)) = best {
            if d <= 1e-8 * z[i].norm() {
                let re = 0.5 * (z[i].re + z[j].re);
                let im = 0.5 * (z[i].im - z[j].im);
                z[i] = Complex64::new(re, im);
                z[j] = Complex64::new(re, -im);
                paired[i] = true;
                paired[j] = true;
            }
        }
    }
}

/// Roots of `x^3 + b x^2 + c x + d` with real coefficients.
///
/// One real root is isolated first (trigonometric form when all three are
/// real, Cardano otherwise), polished, and deflated forward or backward
/// depending on its magnitude relative to the remaining pair. The pair comes
/// from a cancellation-free quadratic formula.
pub fn cubic_roots(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let coeffs = [d, c, b, 1.0];
    let dc = derivative(&coeffs);

    // Depressed cubic t^3 + p t + q with x = t - b/3.
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut real_root = if p == 0.0 && q == 0.0 {
        -shift
    } else if disc < 0.0 {
        // Three real roots; take the largest in magnitude.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (th - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { x } else { acc })
    } else {
        let sq = disc.sqrt();
        let u = (-q / 2.0 - sq.copysign(q)).cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        u + v - shift
    };
    // Newton polish on the original real cubic.
    for _ in 0..6 {
        let f = eval(&coeffs, real_root);
        let fp = eval(&dc, real_root);
        if fp == 0.0 {
            break;
        }
        let next = real_root - f / fp;
        if (eval(&coeffs, next)).abs() >= f.abs() {
            break;
        }
        real_root = next;
    }

    let r = real_root;
    let (qb, qc) = if r == 0.0 {
        (b, c)
    } else if r * r <= (d / r).abs() {
        // forward deflation: x^2 + (b + r) x + (c + r (b + r))
        let q1 = b + r;
        (q1, c + r * q1)
    } else {
        // backward deflation from the constant term
        let q0 = -d / r;
        let q1 = (q0 - c) / r;
        (q1, q0)
    };
    let [z2, z3] = quadratic_roots(1.0, qb, qc);
    let mut out = [Complex64::new(r, 0.0), z2, z3];
    for zi in out.iter_mut().skip(1) {
        *zi = newton_polish(&coeffs, &dc, *zi);
        if zi.im.abs() <= 1e-14 * zi.norm() {
            zi.im = 0.0;
        }
    }
    if out[1].im != 0.0 || out[2].im != 0.0 {
        let re = 0.5 * (out[1].re + out[2].re);
        let im = 0.5 * (out[1].im.abs() + out[2].im.abs());
        out[1] = Complex64::new(re, im);
        out[2] = Complex64::new(re, -im);
    }
    out
}

/// Roots of `a x^2 + b x + c` using the sign-matched formula.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + s.copysign(b));
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, im.abs()), Complex64::new(re, -im.abs())]
    }
}

/// Textbook Cardano formula with principal complex cube roots, kept for
/// comparison with [`cubic_roots`] on well-conditioned inputs.
pub fn cardano_closed_form(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let eta = 3.0 * c - b * b;
    let sig = 9.0 * b * c - 2.0 * b * b * b - 27.0 * d;
    let inner = Complex64::new(4.0 * eta * eta * eta + sig * sig, 0.0).sqrt();
    let w = (Complex64::new(sig, 0.0) + inner).powf(1.0 / 3.0);
    let c2 = 2f64.powf(1.0 / 3.0);
    let i3 = Complex64::new(0.0, 3f64.sqrt());
    let one = Complex64::new(1.0, 0.0);
    let x1 = -b / 3.0 - c2 * eta / (3.0 * w) + w / (3.0 * c2);
    let x2 = -b / 3.0 + (one + i3) * eta / (3.0 * c2 * c2 * w) - (one - i3) * w / (6.0 * c2);
    let x3 = -b / 3.0 + (one - i3) * eta / (3.0 * c2 * c2 * w) - (one + i3) * w / (6.0 * c2);
    [x1, x2, x3]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(rs: &[Complex64], z: Complex64, tol: f64) -> bool {
        rs.iter().any(|r| (r - z).norm() <= tol * z.norm().max(1.0))
    }

    #[test]
    fn eval_and_product() {
        let p = mul(&[1.0, 1.0], &[-1.0, 1.0]);
        assert_eq!(p, vec![-1.0, 0.0, 1.0]);
        assert_eq!(eval(&p, 3.0), 8.0);
        assert_eq!(derivative(&p), vec![0.0, 2.0]);
        assert_eq!(add(&[1.0], &[0.0, 2.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn quartic_with_widely_spread_roots() {
        // (x^2 + 1)(x + 8000)(x + 7999)
        let p = mul(&mul(&[1.0, 0.0, 1.0], &[8000.0, 1.0]), &[7999.0, 1.0]);
        let rs = roots(&p).unwrap();
        assert_eq!(rs.len(), 4);
        for z in [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(-8000.0, 0.0),
            Complex64::new(-7999.0, 0.0),
        ] {
            assert!(has_root(&rs, z, 1e-10), "{z} not in {rs:?}");
        }
    }

    #[test]
    fn cubic_three_real() {
        let rs = cubic_roots(-6.0, 11.0, -6.0);
        for z in [1.0, 2.0, 3.0] {
            assert!(has_root(&rs, Complex64::new(z, 0.0), 1e-13));
        }
    }

    #[test]
    fn cubic_small_and_large_roots() {
        // (x + 1)(x - 1e-4)(x + 2e-4)
        let p = mul(&mul(&[1.0, 1.0], &[-1e-4, 1.0]), &[2e-4, 1.0]);
        let rs = cubic_roots(p[2], p[1], p[0]);
        for z in [-1.0, 1e-4, -2e-4] {
            assert!(
                rs.iter().any(|r| (r.re - z).abs() <= 1e-12 * z.abs() && r.im == 0.0),
                "{z} not in {rs:?}"
            );
        }
    }

    #[test]
    fn cubic_complex_pair() {
        // (x + 2)(x^2 + 2x + 5) -> -2, -1 +- 2i
        let p = mul(&[2.0, 1.0], &[5.0, 2.0, 1.0]);
        let rs = cubic_roots(p[2], p[1], p[0]);
        assert!(has_root(&rs, Complex64::new(-2.0, 0.0), 1e-14));
        assert!(has_root(&rs, Complex64::new(-1.0, 2.0), 1e-14));
        assert!(has_root(&rs, Complex64::new(-1.0, -2.0), 1e-14));
    }

    #[test]
    fn cardano_matches_robust_solver() {
        let (b, c, d) = (1.3, 0.4, -0.7);
        let a = cubic_roots(b, c, d);
        let closed = cardano_closed_form(b, c, d);
        for z in closed {
            assert!(has_root(&a, z, 1e-12));
        }
    }

    #[test]
    fn quadratic_avoids_cancellation() {
        let [x1, x2] = quadratic_roots(1.0, 1e8, 1.0);
        let small = if x1.norm() < x2.norm() { x1 } else { x2 };
        assert!((small.re + 1e-8).abs() < 1e-22);
    }
}
