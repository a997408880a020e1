use std::f64::consts::PI;

use proptest::prelude::*;
use qtunnel::smooth::*;
use qtunnel::spectral::Method;
use qtunnel::{bounce, path, Asymmetry, ModelParams, QuadratureConfig};

fn sp(r: f64) -> SmoothParams {
    SmoothParams::new(12.5, r, 8000.0).unwrap()
}

/// Adaptive Simpson, independent of the library quadrature.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `2 ∫₀^∞ g(τ) dτ` for an even path functional, split at the junction.
fn even_integral(b: &SmoothBounce, g: &dyn Fn(f64) -> f64, tol: f64) -> f64 {
    let inner = simpson(g, 0.0, b.tau1, tol);
    let outer = simpson(g, b.tau1, b.tau1 + 60.0, tol);
    2.0 * (inner + outer)
}

#[test]
fn matching_time_at_unit_ratio() {
    assert!((matching_time(&sp(1.0)).unwrap() - 0.75 * PI).abs() < 1e-8);
}

#[test]
fn bounce_hits_the_junction_and_is_c1() {
    for r in [0.5, 1.0, 2.0, 20.0, 140.0] {
        let b = SmoothBounce::new(&sp(r)).unwrap();
        assert!(b.value(b.tau1).abs() < 1e-9, "r={r}");
        assert!(b.value(-b.tau1).abs() < 1e-9, "r={r}");
        let h = 1e-6 * b.tau1;
        let left = (b.value(b.tau1) - b.value(b.tau1 - h)) / h;
        let right = (b.value(b.tau1 + h) - b.value(b.tau1)) / h;
        // One-sided differences carry an O(h x'') bias.
        let curv = (r * r).max(1.0) * b.amp_b.abs().max(b.amp_a);
        assert!((left - right).abs() < 1e-9 + 2.0 * h * curv, "r={r}");
        assert!((b.velocity(b.tau1 * (1.0 - 1e-12)) - b.velocity(b.tau1 * (1.0 + 1e-12))).abs() < 1e-9);
        for k in 1..50 {
            let t = b.tau1 * k as f64 / 50.0;
            assert!(b.value(t) > 0.0);
        }
    }
}

#[test]
fn path_at_unit_ratio() {
    let p = sp(1.0);
    let b = SmoothBounce::new(&p).unwrap();
    let top = p.barrier_top() + b.amp_b;
    assert!((b.value(0.0) - top).abs() < 1e-12);
    assert!((b.escape_point() - top).abs() < 1e-12);
    assert!((b.value(200.0) + p.minimum()).abs() < 1e-12);
}

#[test]
fn action_matches_time_domain_quadrature() {
    for r in [1.0, 2.0, 20.0, 140.0] {
        let p = sp(r);
        let b = SmoothBounce::new(&p).unwrap();
        let lagrangian = |t: f64| {
            let v = b.velocity(t);
            0.5 * v * v + smooth_potential(b.value(t), &p)
        };
        let s0 = even_integral(&b, &lagrangian, 1e-12);
        let rel = (s0 - b.action()).abs() / s0;
        assert!(rel < 1e-7, "r={r}: {s0} vs {}", b.action());
    }
}

#[test]
fn transform_matches_time_domain_quadrature() {
    for r in [1.0, 20.0] {
        let p = sp(r);
        let b = SmoothBounce::new(&p).unwrap();
        let a = p.minimum();
        for w in [0.0, 0.3, 1.0, 2.5, 7.0, 19.0, 40.0] {
            let g = |t: f64| (b.value(t) + a) * (w * t).cos();
            let want = even_integral(&b, &g, 1e-12);
            let got = b.transform(w);
            assert!((got - want).abs() < 1e-8 * (1.0 + want.abs()), "r={r} w={w}: {got} vs {want}");
        }
    }
}

#[test]
fn frozen_path_shift_is_the_first_order_main_action() {
    // At first order in τ_p the main bounce's action changes by the momentum
    // functional on the bare path, since the bare path is stationary.
    let q = QuadratureConfig::default();
    for sigma in [0.5, 1.0, 10.0] {
        let tau_p = 1e-5;
        let p = ModelParams::new(12.5, Asymmetry::Finite(sigma), 0.0, tau_p, 8000.0).unwrap();
        let main = bounce::enhancement(&p, &q, Method::Expansion).unwrap().ln_enhancement;
        let bare = p.uncoupled();
        let xi = bounce::bare_bounce_time(sigma);
        let shift = momentum_action_shift(
            |w| path::path_amplitude(w, &bare, xi),
            tau_p,
            8000.0,
            1.0 / xi.min(1.0),
            &q,
        )
        .unwrap();
        let rel = (main + shift).abs() / main;
        assert!(rel < 1e-4, "sigma={sigma}: {main} vs {}", -shift);
    }
}

#[test]
fn enhancement_grows_with_tau_p() {
    for r in [1.0, 2.0, 20.0, 140.0] {
        let p = sp(r);
        let mut last = 1.0;
        for k in 1..=10 {
            let tau_p = 1e-3 * k as f64;
            let e = perturbative_action(&p, tau_p).unwrap().enhancement;
            assert!(e > last, "r={r} tau_p={tau_p}");
            last = e;
        }
    }
}

#[test]
fn ratio_ordering_reverses_below_two() {
    let tau_p = 1e-3;
    let e = |r: f64| perturbative_action(&sp(r), tau_p).unwrap().enhancement;
    assert!(e(1.0) > e(2.0));
    assert!(e(2.0) < e(20.0));
    assert!(e(20.0) < e(140.0));
}

#[test]
fn slopes_and_mapped_asymmetry() {
    assert!((slope_at_escape(&sp(20.0)) + 100.0).abs() < 1e-6);
    assert!((slope_at_escape(&sp(140.0)) + 700.0).abs() < 1e-6);
    assert!((slope_mapped_sigma(&sp(20.0)) - 400.0).abs() < 1e-6);
    assert!((slope_mapped_sigma(&sp(140.0)) - 19600.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barrier_height_is_fixed(b in 0.5f64..50.0, r in 0.2f64..200.0) {
        let p = SmoothParams::new(b, r, 8000.0).unwrap();
        let top = smooth_potential(p.barrier_top(), &p);
        prop_assert!((top - b).abs() < 1e-10 * b);
        let h = 1e-7 * p.minimum();
        prop_assert!(smooth_potential(p.barrier_top() + h, &p) <= top);
        prop_assert!(smooth_potential(p.barrier_top() - h, &p) <= top);
        let gap = (smooth_potential(-1e-12, &p) - smooth_potential(1e-12, &p)).abs();
        prop_assert!(gap < 1e-9 * b);
    }

    #[test]
    fn matching_time_closed_form(r in 0.2f64..200.0) {
        let t = matching_time(&sp(r)).unwrap();
        prop_assert!((t - (PI - r.atan()) / r).abs() < 1e-12 * (1.0 + 1.0 / r));
    }

    #[test]
    fn escape_slope_closed_form(b in 0.5f64..50.0, r in 0.2f64..200.0) {
        let p = SmoothParams::new(b, r, 8000.0).unwrap();
        let want = -p.minimum() * (1.0 + r * r).sqrt();
        prop_assert!((slope_at_escape(&p) - want).abs() < 1e-9 * want.abs());
    }
}

#[test]
fn matching_time_skips_the_amplitude_pole() {
    // The scan bracket here straddles the pole of the inner amplitude.
    let r = 0.360_460_609_416_896_3;
    let t = matching_time(&sp(r)).unwrap();
    assert!((t - (PI - r.atan()) / r).abs() < 1e-12 * (1.0 + 1.0 / r));
}
