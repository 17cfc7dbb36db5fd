use num_complex::Complex64;
use singosc_core::measures::*;
use singosc_core::numerics::{gamma_ln, QuadratureScheme};

const K: f64 = 1.25;

fn scheme() -> QuadratureScheme {
    QuadratureScheme::default()
}

fn gamma(x: f64) -> f64 {
    gamma_ln(x).unwrap().exp()
}

#[test]
fn f_moments_match_gamma_products() {
    let s = scheme();
    let m0 = f_moment(0, K, &s).unwrap().value.re;
    assert!((m0 - 1.329_340_388_2).abs() < 1e-6 * 1.33, "{m0}");
    for n in 0..=6 {
        for k in [0.75, K, 2.3] {
            let got = f_moment(n, k, &s).unwrap().value.re;
            let want = gamma(n as f64 + 1.0) * gamma(n as f64 + 2.0 * k);
            assert!(
                ((got - want) / want).abs() < 1e-5,
                "n={n} k={k}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn f_decays_like_exp_minus_two_sqrt_x() {
    // d ln f / d√x → −2
    let (s1, s2) = (30.0f64, 31.0f64);
    let slope =
        (f_weight(s2 * s2, K).unwrap().ln() - f_weight(s1 * s1, K).unwrap().ln()) / (s2 - s1);
    // the algebraic prefactor x^{k−½}·x^{−1/4} shifts the slope by O(1/s)
    assert!((slope + 2.0).abs() < 0.05, "{slope}");
}

#[test]
fn weights_are_positive() {
    let table = PhiTable::new(K, 1, &scheme()).unwrap();
    for j in 1..400 {
        let x = 0.05 * j as f64 * j as f64 / 10.0;
        assert!(f_weight(x, K).unwrap() > 0.0);
        assert!(table.eval(x).unwrap() > 0.0, "Φ({x})");
    }
}

#[test]
fn phi_moments_solve_the_moment_problem() {
    let s = scheme();
    for m in [0, 1, 2] {
        let table = PhiTable::new(K, m, &s).unwrap();
        for n in 0..=6 {
            let got = table.moment(n, &s).unwrap().value.re;
            let want =
                gamma(n as f64 + 1.0) * gamma(n as f64 + 2.0 * K) / (n as f64 + 2.0 * K + m as f64);
            assert!(
                ((got - want) / want).abs() < 1e-5,
                "m={m} n={n}: {got} vs {want}"
            );
        }
    }
    let t = PhiTable::new(K, 1, &s).unwrap();
    let m0 = t.moment(0, &s).unwrap().value.re;
    assert!((m0 - 0.379_811_539_5).abs() < 1e-6 * 0.38);
}

#[test]
fn table_matches_direct_quadrature() {
    let s = scheme();
    let table = PhiTable::new(K, 1, &s).unwrap();
    for x in [1e-4, 0.013, 0.5, 2.0, 7.7, 40.0, 300.0] {
        let a = table.eval(x).unwrap();
        let b = phi_weight(x, K, 1, &s).unwrap();
        assert!(((a - b) / b).abs() < 1e-7, "x={x}: {a} vs {b}");
    }
}

#[test]
fn phi_tends_to_zero_times_x() {
    let table = PhiTable::new(K, 1, &scheme()).unwrap();
    let v: Vec<f64> = [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&x| x * table.eval(x).unwrap())
        .collect();
    assert!(v[0] > v[1] && v[1] > v[2] && v[2] < 1e-5);
}

#[test]
fn phi_recovers_its_defining_integrand() {
    let table = PhiTable::new(K, 2, &scheme()).unwrap();
    let xs: Vec<f64> = (1..60).map(|j| 0.02 * j as f64 * j as f64).collect();
    let worst = phi_recovery_check(&table, &xs).unwrap();
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn resolution_of_identity_diagonals() {
    let s = scheme();
    let measures = [
        RadialMeasure::original_bg(K).unwrap(),
        RadialMeasure::transformed_bg(PhiTable::new(K, 1, &s).unwrap()),
        RadialMeasure::perelomov(K).unwrap(),
    ];
    for mu in &measures {
        for n in 0..=6 {
            let v = identity_resolution_check(mu, n, n, &s).unwrap();
            assert!((v - 1.0).norm() < 1e-5, "{:?} n={n}: {v}", mu.family);
        }
        assert_eq!(
            identity_resolution_check(mu, 0, 1, &s).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }
}

#[test]
fn kernel_matches_series_and_is_positive_on_the_diagonal() {
    let l = Complex64::new(0.7, 0.4);
    let lp = Complex64::new(-1.1, 0.9);
    // oracle: Σ aₙ² (λλ̄')ⁿ, aₙ² = Γ(2k)/(n! Γ(n+2k)), N = 60
    let w = l * lp.conj();
    let mut series = Complex64::new(0.0, 0.0);
    for n in 0..=60 {
        let a2 = (gamma_ln(2.0 * K).unwrap()
            - gamma_ln(n as f64 + 1.0).unwrap()
            - gamma_ln(n as f64 + 2.0 * K).unwrap())
        .exp();
        series += w.powu(n) * a2;
    }
    let closed = reproducing_kernel(l, lp, K).unwrap();
    assert!(
        (closed - series).norm() < 1e-8 * series.norm(),
        "{closed} vs {series}"
    );
    let d = reproducing_kernel(Complex64::new(1.3, 0.0), Complex64::new(1.3, 0.0), K).unwrap();
    assert!(d.re > 0.0 && d.im == 0.0);
}

#[test]
fn kernel_reproduces_point_values() {
    let s = scheme();
    let l = Complex64::new(0.7, 0.0);
    let v = kernel_point_evaluation(l, 2, K, &s).unwrap();
    assert!((v - l * l).norm() < 1e-5, "{v}");
    let l = Complex64::new(-0.4, 0.9);
    for p in 0..4 {
        let v = kernel_point_evaluation(l, p, K, &s).unwrap();
        assert!((v - l.powu(p)).norm() < 1e-5, "p={p}: {v}");
    }
}

#[test]
fn domain_errors() {
    assert!(f_weight(-1.0, K).is_err());
    assert!(f_weight(1.0, 0.5).is_err());
    assert!(perelomov_measure_density(1.0, K).is_err());
    assert!(PhiTable::new(0.4, 1, &scheme()).is_err());
}
