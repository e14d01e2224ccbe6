use std::f64::consts::PI;

use cone_propagator::specfun::{bessel_j, gegenbauer_c, h1, h1_derivative, Tolerance};
use proptest::prelude::*;

fn j(nu: f64, x: f64) -> f64 {
    bessel_j(nu, x, Tolerance::default()).unwrap()
}

fn half_order(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * x.sin()
}

fn three_halves_order(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos())
}

proptest! {
    #[test]
    fn bessel_recurrence(nu in 1.0f64..80.0, x in 0.5f64..500.0) {
        let mid = j(nu, x);
        let r = j(nu - 1.0, x) + j(nu + 1.0, x) - 2.0 * nu / x * mid;
        prop_assert!(r.abs() <= 1e-9 * (1.0 + mid.abs()), "residual {r:e}");
    }

    #[test]
    fn bessel_half_integer_orders(x in 0.1f64..200.0) {
        prop_assert!((j(0.5, x) - half_order(x)).abs() <= 1e-10);
        prop_assert!((j(1.5, x) - three_halves_order(x)).abs() <= 1e-10);
    }

    #[test]
    fn bessel_uniform_bound(nu in 0.0f64..400.0, x in 8.0f64..3000.0) {
        prop_assert!(j(nu, x).abs() <= 1.2 * x.powf(-1.0 / 3.0));
    }

    #[test]
    fn gegenbauer_endpoint_dominates(m in 0u64..=2000, d in 0.01f64..10.0, t in -1.0f64..=1.0) {
        let top = gegenbauer_c(m, d, 1.0).unwrap();
        prop_assert!(gegenbauer_c(m, d, t).unwrap().abs() <= top * (1.0 + 1e-12));
    }

    #[test]
    fn gegenbauer_parity(m in 0u64..=2000, d in 0.01f64..10.0, t in -1.0f64..=1.0) {
        let a = gegenbauer_c(m, d, t).unwrap();
        let b = gegenbauer_c(m, d, -t).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-10 * a.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn h1_is_strictly_decreasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!(a < b);
        prop_assert!(h1(a).unwrap() > h1(b).unwrap());
    }

    #[test]
    fn h1_derivative_matches_finite_difference(mu in 1e-6f64..0.999_999) {
        let step = 1e-7;
        let fd = (h1(mu + step).unwrap() - h1(mu - step).unwrap()) / (2.0 * step);
        let exact = h1_derivative(mu).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6);
        prop_assert!((exact + mu.acos()).abs() <= 1e-14);
    }
}

#[test]
fn bessel_recurrence_across_the_region_switch() {
    // orders straddling ν = 2x, where the algorithm changes method
    for &x in &[12.5, 40.0, 150.0] {
        for k in 0..40 {
            let nu = 2.0 * x - 10.0 + 0.5 * k as f64;
            let mid = j(nu, x);
            let r = j(nu - 1.0, x) + j(nu + 1.0, x) - 2.0 * nu / x * mid;
            assert!(r.abs() <= 1e-9 * (1.0 + mid.abs()), "nu={nu} x={x} residual {r:e}");
        }
    }
}

#[test]
fn gegenbauer_endpoint_closed_forms() {
    for m in 0..=2000u64 {
        let mf = m as f64;
        for (d, exact) in [(0.5, 1.0), (1.0, mf + 1.0), (1.5, (mf + 1.0) * (mf + 2.0) / 2.0)] {
            let v = gegenbauer_c(m, d, 1.0).unwrap();
            assert!((v - exact).abs() <= 1e-10 * exact, "m={m} d={d}: {v} vs {exact}");
        }
    }
}
