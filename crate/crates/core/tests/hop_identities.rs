mod common;

use common::{hop, rel, GRID_DB, INTEGER_FIXTURES};
use fso_relay_core::hop::Regime;
use fso_relay_core::quad::{integrate, Tolerance};
use fso_relay_core::specfun::ln_upper_inc_gamma;

const XS: [f64; 7] = [1e-3, 0.05, 0.3, 1.0, 4.0, 20.0, 150.0];

#[test]
fn finite_sum_pdf_equals_incomplete_gamma_pdf() {
    for &(a, b, xi) in &INTEGER_FIXTURES {
        for &db in &GRID_DB {
            let h = hop(a, b, xi, db);
            assert_eq!(h.regime(), Regime::Closed);
            for &x in &XS {
                let exact = h.snr_pdf(x).unwrap();
                if exact < 1e-250 {
                    continue;
                }
                let reduced = h.snr_pdf_reduced(x).unwrap();
                assert!(
                    rel(reduced, exact) < 1e-10,
                    "({a},{b},{xi}) {db} dB x={x}: {reduced} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn ccdf_equals_one_minus_integrated_pdf() {
    let tol = Tolerance::new(1e-14, 1e-12);
    for &(a, b, xi) in &INTEGER_FIXTURES {
        for &db in &[0.0, 20.0] {
            let h = hop(a, b, xi, db);
            for &x in &[0.01, 0.5, 2.0, 10.0] {
                let mass = integrate(|y| h.snr_pdf(y).unwrap_or(0.0), 0.0, x, tol).unwrap();
                let closed = h.snr_ccdf(x).unwrap();
                assert!(
                    (closed - (1.0 - mass.value)).abs() < 1e-8,
                    "({a},{b},{xi}) {db} dB x={x}"
                );
                assert!((h.snr_ccdf_numeric(x).unwrap() - closed).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn density_scales_with_gamma_bar() {
    let h = hop(4.0, 2.0, 1.0, 10.0);
    let k = 7.5;
    let hk = h.with_gamma_bar(h.gamma_bar() * k).unwrap();
    for &x in &XS {
        let lhs = k * hk.snr_pdf(k * x).unwrap();
        assert!(rel(lhs, h.snr_pdf(x).unwrap()) < 1e-12);
        assert!((hk.snr_ccdf(k * x).unwrap() - h.snr_ccdf(x).unwrap()).abs() < 1e-13);
    }
}

#[test]
fn negative_order_gamma_bound_holds_on_grid() {
    for j in 0..10 {
        for &x in &[1e-3, 0.02, 0.3, 1.0, 3.0, 12.0, 80.0, 600.0] {
            let g = ln_upper_inc_gamma(-(j as f64), x).unwrap();
            let bound = -x - (j as f64 + 1.0) * x.ln();
            assert!(g <= bound + 1e-12, "j={j} x={x}");
        }
    }
}

#[test]
fn bound_density_dominates_exact_density() {
    for &(a, b, xi) in &[(4.0, 2.0, 2.0), (2.0, 2.0, 3.0), (5.0, 3.0, 3.0)] {
        let h = hop(a, b, xi, 20.0);
        assert_eq!(h.regime(), Regime::Bound);
        let e = h.expansion().unwrap();
        assert!(e.bound && e.mass() > 1.0);
        for &x in &XS {
            let exact = h.snr_pdf(x).unwrap();
            assert!(h.snr_pdf_bound(x) >= exact * (1.0 - 1e-12), "x={x}");
            assert!(e.pdf(x) >= exact * (1.0 - 1e-12));
        }
        assert!(h.snr_ccdf(1.0).is_err());
    }
}

#[test]
fn non_integer_parameters_are_numeric() {
    let h = hop(4.2, 2.3, 1.0, 10.0);
    assert_eq!(h.regime(), Regime::Numeric);
    assert!(h.expansion().is_err());
    let c = h.snr_ccdf_numeric(1.0).unwrap();
    assert!(c > 0.0 && c < 1.0);
    let h = hop(4.0, 2.0, 1.5, 10.0);
    assert_eq!(h.regime(), Regime::Numeric);
}

#[test]
fn mean_snr_matches_density() {
    let h = hop(5.0, 3.0, 2.0, 10.0);
    let m = fso_relay_core::quad::integrate_positive_axis(
        |x| x * h.snr_pdf(x).unwrap_or(0.0),
        Tolerance::new(1e-14, 1e-11),
    )
    .unwrap();
    assert!(rel(m.value, h.mean_snr()) < 1e-8);
}
