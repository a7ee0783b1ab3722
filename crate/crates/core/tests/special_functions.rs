use std::f64::consts::PI;

use alphaflow_core::special::{bessel_k, AlphaKernel, EULER_GAMMA};
use proptest::prelude::*;

/// `(order, z, value)` rows from the 50-digit reference table.
fn reference_table() -> Vec<(u32, f64, f64)> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/bessel_k.csv");
    let body = std::fs::read_to_string(path).expect("fixture present");
    body.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn bessel_matches_high_precision_table() {
    let rows = reference_table();
    assert_eq!(rows.len(), 162);
    let mut worst = 0.0f64;
    for (order, z, want) in rows {
        let got = bessel_k(order, z).unwrap();
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
        assert!(rel <= 1e-10, "K{order}({z}) = {got}, reference {want}, rel {rel:e}");
    }
    eprintln!("worst relative error {worst:e}");
}

#[test]
fn k0_at_one() {
    assert!((bessel_k(0, 1.0).unwrap() - 0.421_024_438_240_708_34).abs() < 1e-15);
}

#[test]
fn small_argument_behaviour() {
    for &z in &[1e-6, 1e-8, 1e-10] {
        let k0 = bessel_k(0, z).unwrap();
        assert!((k0 + (z / 2.0).ln() + EULER_GAMMA).abs() < 1e-9, "z = {z}");
        assert!((z * bessel_k(1, z).unwrap() - 1.0).abs() < 1e-9, "z = {z}");
    }
}

#[test]
fn domain_errors_and_underflow() {
    for bad in [0.0, -1.0, f64::NAN, f64::NEG_INFINITY] {
        assert!(bessel_k(0, bad).is_err());
        assert!(bessel_k(1, bad).is_err());
    }
    assert_eq!(bessel_k(0, 1e4).unwrap(), 0.0);
    assert_eq!(bessel_k(1, 1e4).unwrap(), 0.0);
}

#[test]
fn bessel_positive_and_decreasing() {
    for order in 0..2 {
        let vals: Vec<f64> = log_grid(1e-6, 50.0, 400)
            .into_iter()
            .map(|z| bessel_k(order, z).unwrap())
            .collect();
        assert!(vals.iter().all(|&v| v > 0.0));
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "K{order} not decreasing");
    }
}

#[test]
fn psi_limit_at_origin() {
    for &a in &[1.0, 0.1, 0.01] {
        let k = AlphaKernel::new(a).unwrap();
        let want = ((2.0 * a).ln() - EULER_GAMMA) / (2.0 * PI);
        assert_eq!(k.psi_derivative(0, 0.0).unwrap(), want);
        assert!((k.psi_derivative(0, 1e-9 * a).unwrap() - want).abs() < 1e-12);
        assert_eq!(k.psi_derivative(1, 0.0).unwrap(), 0.0);
        assert!(k.psi_derivative(2, 0.0).is_err());
        assert!(k.psi_derivative(3, 0.0).is_err());
    }
}

#[test]
fn first_derivative_leading_term_near_origin() {
    for &a in &[1.0, 0.1, 0.01] {
        let k = AlphaKernel::new(a).unwrap();
        for &x in &[1e-3, 1e-4, 1e-6, 1e-8] {
            let r = x * a;
            let got = k.psi_derivative(1, r).unwrap();
            let lead = -(r / (a * a)) * x.ln() / (4.0 * PI);
            let rel = ((got - lead) / lead).abs();
            assert!(rel <= 0.1, "alpha {a}, r/alpha {x}: {got} vs {lead}");
        }
    }
}

#[test]
fn bessel_parts_vanish_far_away() {
    for &a in &[1.0, 0.1, 0.01] {
        let k = AlphaKernel::new(a).unwrap();
        for order in 0..4 {
            let v = k.bessel_part(order, 50.0 * a).unwrap();
            // the derivatives scale like α^{-order}; compare in units of α
            let scaled = v.abs() * a.powi(order as i32);
            assert!(scaled < 1e-12, "order {order}, alpha {a}: {v:e}");
        }
        let psi = k.psi_derivative(0, 50.0 * a).unwrap();
        assert!((psi - (50.0 * a).ln() / (2.0 * PI)).abs() < 1e-15 + 1e-12);
    }
}

#[test]
fn first_derivative_bounded_by_inverse_alpha() {
    let sup = |a: f64| {
        let k = AlphaKernel::new(a).unwrap();
        log_grid(1e-8 * a, 100.0 * a, 4000)
            .into_iter()
            .map(|r| k.psi_derivative(1, r).unwrap().abs())
            .fold(0.0, f64::max)
    };
    let c = sup(1.0);
    assert!(c.is_finite() && c > 0.0);
    for &a in &[0.1, 0.01] {
        let ratio = sup(a) * a / c;
        assert!(
            (ratio - 1.0).abs() < 1e-6,
            "alpha {a}: sup |DPsi| * alpha / C = {ratio}"
        );
    }
}

#[test]
fn derivatives_agree_with_central_differences() {
    for &a in &[1.0, 0.1] {
        let k = AlphaKernel::new(a).unwrap();
        for &x in &[0.05, 0.3, 1.0, 2.5, 7.0] {
            let r = x * a;
            let h = 1e-4 * r;
            for order in 0..3 {
                let fd =
                    (k.psi_derivative(order, r + h).unwrap() - k.psi_derivative(order, r - h).unwrap()) / (2.0 * h);
                let exact = k.psi_derivative(order + 1, r).unwrap();
                let rel = ((fd - exact) / exact).abs();
                assert!(rel <= 1e-6, "alpha {a}, r {r}, order {order}: fd {fd}, exact {exact}");
            }
        }
    }
}

#[test]
fn second_derivative_positive_and_growing_near_origin() {
    for &a in &[1.0, 0.01] {
        let k = AlphaKernel::new(a).unwrap();
        // ascending r/α, so values must shrink
        let vals: Vec<f64> = log_grid(1e-8, 1e-3, 60)
            .into_iter()
            .map(|x| k.psi_derivative(2, x * a).unwrap())
            .collect();
        assert!(vals.iter().all(|&v| v > 0.0));
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        let x: f64 = 1e-8;
        let lead = -x.ln() / (4.0 * PI * a * a);
        assert!((vals[0] / lead - 1.0).abs() < 0.1);
    }
}

#[test]
fn green_function_integrates_to_one() {
    // ∫ 2πr G(r) dr with r = α e^u; trapezoid in u converges geometrically
    for &a in &[1.0, 0.1, 0.01] {
        let k = AlphaKernel::new(a).unwrap();
        let (lo, hi, n) = (-40.0f64, 4.2f64, 8000usize);
        let du = (hi - lo) / n as f64;
        let total: f64 = (0..=n)
            .map(|i| {
                let r = a * (lo + i as f64 * du).exp();
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * 2.0 * PI * r * r * k.green_helmholtz(r).unwrap()
            })
            .sum::<f64>()
            * du;
        assert!((total - 1.0).abs() < 1e-8, "alpha {a}: {total}");
    }
}

#[test]
fn green_function_value() {
    let k = AlphaKernel::new(1.0).unwrap();
    let want = 0.421_024_438_240_708_34 / (2.0 * PI);
    assert!((k.green_helmholtz(1.0).unwrap() - want).abs() < 1e-16);
    assert!(k.green_helmholtz(0.0).is_err());
    assert!(k.green_helmholtz(-1.0).is_err());
}

#[test]
fn evaluations_are_bitwise_repeatable_across_threads() {
    let k = AlphaKernel::new(0.07).unwrap();
    let grid = log_grid(1e-7, 10.0, 500);
    let eval = |k: AlphaKernel, grid: Vec<f64>| -> Vec<u64> {
        grid.iter()
            .flat_map(|&r| (0..4).map(move |o| k.psi_derivative(o, r).unwrap().to_bits()))
            .collect()
    };
    let here = eval(k, grid.clone());
    let there = std::thread::spawn(move || eval(k, grid)).join().unwrap();
    assert_eq!(here, there);
}

proptest! {
    #[test]
    fn green_scaling(a in 1e-3f64..2.0, r in 1e-4f64..10.0) {
        let ka = AlphaKernel::new(a).unwrap();
        let k1 = AlphaKernel::new(1.0).unwrap();
        let lhs = ka.green_helmholtz(r).unwrap();
        let rhs = k1.green_helmholtz(r / a).unwrap() / (a * a);
        // one rounding in r/α is amplified by the e^{-r/α} factor
        let tol = 1e-14 * (1.0 + r / a);
        prop_assert!(lhs == rhs || ((lhs - rhs) / rhs).abs() < tol);
    }

    #[test]
    fn derivative_scaling(a in 1e-3f64..2.0, x in 1e-5f64..40.0, order in 1u32..4) {
        let ka = AlphaKernel::new(a).unwrap();
        let k1 = AlphaKernel::new(1.0).unwrap();
        let lhs = ka.psi_derivative(order, x * a).unwrap();
        let rhs = k1.psi_derivative(order, x).unwrap() / a.powi(order as i32);
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn psi_shifts_by_log_alpha(a in 1e-3f64..2.0, x in 1e-5f64..40.0) {
        let ka = AlphaKernel::new(a).unwrap();
        let k1 = AlphaKernel::new(1.0).unwrap();
        let lhs = ka.psi_derivative(0, x * a).unwrap();
        let rhs = k1.psi_derivative(0, x).unwrap() + a.ln() / (2.0 * PI);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }
}
