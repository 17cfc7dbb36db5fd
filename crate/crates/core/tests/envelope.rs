use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use singosc_core::envelope::*;
use singosc_core::numerics::RadialGrid;
use singosc_core::states::{basis_state, BasisIndex, PhysParams};
use singosc_core::Error;

#[test]
fn free_particle_closed_forms() {
    for t in [-1.5, 0.0, 0.5, 2.0, 30.0] {
        let w = envelope_at(&FrequencyProfile::Zero, t, Convention::WronskianHalfI).unwrap();
        assert!((w.eps - Complex64::new(t, -1.0) / 2.0).norm() < 1e-15 * (1.0 + t.abs()));
        assert!((w.gamma - (t * t + 1.0) / 4.0).abs() < 1e-14 * (1.0 + t * t));
        assert!((w.gamma_dot - t / 2.0).abs() < 1e-14 * (1.0 + t.abs()));
        let p = envelope_at(&FrequencyProfile::Zero, t, Convention::PaperFreeParticle).unwrap();
        assert!((p.eps - Complex64::new(t, 1.0) / 2f64.sqrt()).norm() < 1e-15 * (1.0 + t.abs()));
        assert!((p.wronskian() - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        // the two envelopes differ by |ε| → √2|ε|
        assert!((p.gamma - 2.0 * w.gamma).abs() < 1e-13 * p.gamma);
    }
}

#[test]
fn paper_densities_are_dilations_of_wronskian_densities() {
    // |ψ^paper(x)|² = 2^{−1/2} |ψ^wr(x/√2)|²
    let p = PhysParams::from_g(2.0).unwrap();
    let g = Arc::new(RadialGrid::uniform(20.0, 2000).unwrap());
    let x: Vec<f64> = g.points().to_vec();
    let gs =
        Arc::new(RadialGrid::from_points(x.iter().map(|v| v / 2f64.sqrt()).collect()).unwrap());
    for t in [0.0, 1.3] {
        let ep = envelope_at(&FrequencyProfile::Zero, t, Convention::PaperFreeParticle).unwrap();
        let ew = envelope_at(&FrequencyProfile::Zero, t, Convention::WronskianHalfI).unwrap();
        for n in [0, 2] {
            let a = basis_state(&BasisIndex::bound(n, &p), &p, &ep, &g).unwrap();
            let b = basis_state(&BasisIndex::bound(n, &p), &p, &ew, &gs).unwrap();
            for j in 0..x.len() {
                let want = b.values[j].norm_sqr() / 2f64.sqrt();
                assert!(
                    (a.values[j].norm_sqr() - want).abs() < 1e-12,
                    "t={t} n={n} x={}",
                    x[j]
                );
            }
        }
    }
}

#[test]
fn phase_is_continuous_through_the_branch_cut() {
    // constant ω: arg ε winds by 2ω t, crossing ±π repeatedly
    let p = FrequencyProfile::Constant(1.7);
    let mut prev = envelope_at(&p, 0.0, Convention::WronskianHalfI)
        .unwrap()
        .theta;
    for i in 1..=2000 {
        let t = 0.005 * i as f64;
        let th = envelope_at(&p, t, Convention::WronskianHalfI)
            .unwrap()
            .theta;
        assert!((th - prev).abs() < 0.05, "jump at t={t}");
        prev = th;
    }
    assert!(prev.abs() > 4.0 * std::f64::consts::PI);
}

#[test]
fn table_errors() {
    assert!(FrequencyTable::new(vec![0.0], vec![1.0]).is_err());
    assert!(FrequencyTable::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    assert!(FrequencyTable::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    let tab = FrequencyTable::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
    assert_eq!(tab.omega(0.25).unwrap(), 1.25);
    assert!(matches!(tab.omega(2.0), Err(Error::OutOfTable { .. })));
    assert!(envelope_at(
        &FrequencyProfile::Zero,
        f64::NAN,
        Convention::WronskianHalfI
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tabulated_envelopes_conserve_the_wronskian(
        w0 in 0.2f64..2.0,
        w1 in 0.2f64..2.0,
        w2 in 0.0f64..2.0,
        t in 0.1f64..4.0,
    ) {
        let tab = FrequencyTable::new(vec![0.0, 1.5, 4.0], vec![w0, w1, w2]).unwrap();
        let p = FrequencyProfile::Tabulated(tab);
        for conv in [Convention::WronskianHalfI, Convention::PaperFreeParticle] {
            let e = envelope_at(&p, t, conv).unwrap();
            prop_assert!((e.wronskian() - conv.wronskian()).norm() < 1e-9);
            // ε̈ + 4ω²ε = 0 by centred differences away from the table kinks
            if (t - 1.5).abs() > 0.01 {
                let h = 1e-3;
                let at = |s: f64| envelope_at(&p, s, conv).unwrap().eps;
                let dd = (at(t + h) - at(t) * 2.0 + at(t - h)) / (h * h);
                let om = p.omega(t).unwrap();
                prop_assert!((dd + at(t) * 4.0 * om * om).norm() < 1e-4 * (1.0 + at(t).norm()));
            }
        }
    }

    #[test]
    fn gamma_dot_is_the_derivative_of_gamma(t in -3.0f64..3.0, w in 0.1f64..2.0) {
        let p = FrequencyProfile::Constant(w);
        for profile in [FrequencyProfile::Zero, p] {
            let h = 1e-5;
            let at = |s: f64| envelope_at(&profile, s, Convention::WronskianHalfI).unwrap();
            let fd = (at(t + h).gamma - at(t - h).gamma) / (2.0 * h);
            prop_assert!((fd - at(t).gamma_dot).abs() < 1e-7);
        }
    }
}
