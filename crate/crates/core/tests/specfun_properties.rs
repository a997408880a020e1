use num_complex::Complex64;
use proptest::prelude::*;
use qtunnel::specfun::{aux_f, aux_g, cos_integral, sin_integral};

/// Adaptive Simpson on a complex integrand.
fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> Complex64,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `f` and `g` from their Laplace forms `∫₀^∞ e^{-zt} {1, t}/(1 + t²) dt`,
/// summed over unit-then-doubling panels until the envelope is negligible.
fn laplace_oracle(z: Complex64) -> (Complex64, Complex64) {
    let kf = |t: f64| (-z * t).exp() / (1.0 + t * t);
    let kg = |t: f64| (-z * t).exp() * t / (1.0 + t * t);
    let (mut f, mut g) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut lo: f64 = 0.0;
    let osc = 1.0 / (1.0 + z.im.abs());
    loop {
        let width = if lo < 8.0 { osc.min(1.0) } else { (lo * 0.25).min(osc * 8.0).max(osc) };
        let hi = lo + width;
        f += simpson(&kf, lo, hi, 1e-16);
        g += simpson(&kg, lo, hi, 1e-16);
        lo = hi;
        if (-z.re * lo).exp() < 1e-18 * lo.max(1.0) {
            break;
        }
    }
    (f, g)
}

#[test]
fn sine_and_cosine_integral_derivatives() {
    let mut x: f64 = 0.1;
    while x < 80.0 {
        let h = 1e-4 * x.min(1.0);
        let dsi = (sin_integral(x + h) - sin_integral(x - h)) / (2.0 * h);
        assert!((dsi - x.sin() / x).abs() < 1e-6, "Si' at {x}");
        let dci = (cos_integral(x + h).unwrap() - cos_integral(x - h).unwrap()) / (2.0 * h);
        assert!((dci - x.cos() / x).abs() < 1e-6, "Ci' at {x}");
        x += 0.173;
    }
}

#[test]
fn laplace_oracle_reproduces_known_value() {
    // f(1) from a 30-digit table.
    let (f, _) = laplace_oracle(Complex64::new(1.0, 0.0));
    assert!((f.re - 0.621_449_624_235_813_36).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn auxiliary_functions_match_quadrature(re in 0.01f64..100.0, im in -10.0f64..10.0) {
        let z = Complex64::new(re, im);
        let (f_want, g_want) = laplace_oracle(z);
        let f = aux_f(z).unwrap();
        let g = aux_g(z).unwrap();
        prop_assert!((f - f_want).norm() < 1e-8 * f_want.norm().max(1e-3), "f({z})");
        prop_assert!((g - g_want).norm() < 1e-8 * g_want.norm().max(1e-3), "g({z})");
    }

    #[test]
    fn conjugation_symmetry(re in 1e-3f64..200.0, im in -200.0f64..200.0) {
        let z = Complex64::new(re, im);
        let fz = aux_f(z).unwrap();
        let fc = aux_f(z.conj()).unwrap();
        let gz = aux_g(z).unwrap();
        let gc = aux_g(z.conj()).unwrap();
        prop_assert!((fz.conj() - fc).norm() <= 1e-14 * fz.norm());
        prop_assert!((gz.conj() - gc).norm() <= 1e-14 * gz.norm());
    }
}
