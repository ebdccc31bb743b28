mod common;

use common::{hop, link, GRID_DB, INTEGER_FIXTURES};
use fso_relay_core::aber::{aber, aber_df, aber_from_cdf, aber_quadrature, AberMethod};
use fso_relay_core::relay::{CsiMode, Gain, Protocol, RelayLink};
use fso_relay_core::Modulation;

const CLOSED: [Protocol; 3] = [
    Protocol::Df,
    Protocol::CsiAf(CsiMode::Approximate),
    Protocol::FixedAf(Gain::Auto),
];

#[test]
fn closed_forms_match_quadrature_on_fixtures() {
    for &fx in &INTEGER_FIXTURES {
        for &db in &GRID_DB {
            for &p in &CLOSED {
                let l = link(fx, db, p);
                let c = aber(&l, Modulation::BPSK).unwrap();
                assert_eq!(c.method, AberMethod::ClosedForm);
                let q = aber_quadrature(&l, Modulation::BPSK).unwrap();
                assert!(
                    (c.value - q).abs() <= 1e-6,
                    "{fx:?} {db} dB {}: {} vs {q}",
                    p.name(),
                    c.value
                );
            }
        }
    }
}

#[test]
fn closed_forms_match_quadrature_of_integral_cdf() {
    let m = Modulation::new(1.0, 1.0).unwrap();
    for &p in &CLOSED {
        let l = link((4.0, 2.0, 1.0), 20.0, p);
        let c = aber(&l, m).unwrap().value;
        let q = aber_from_cdf(|z| l.cdf_numeric(z), m).unwrap();
        assert!((c - q).abs() <= 1e-6, "{}: {c} vs {q}", p.name());
    }
}

#[test]
fn other_kernels_match_quadrature() {
    let kernels = [
        Modulation::new(1.0, 1.0).unwrap(),
        Modulation::new(1.0, 0.5).unwrap(),
        Modulation::new(2.5, 0.3).unwrap(),
    ];
    for &m in &kernels {
        for &p in &CLOSED {
            let l = link((5.0, 3.0, 2.0), 15.0, p);
            let c = aber(&l, m).unwrap().value;
            let q = aber_quadrature(&l, m).unwrap();
            assert!((c - q).abs() <= 1e-6, "{} {m:?}", p.name());
        }
    }
}

#[test]
fn asymmetric_hops_match_quadrature() {
    let h1 = hop(4.0, 3.0, 1.0, 22.0);
    let h2 = hop(3.0, 2.0, 1.0, 14.0);
    for &p in &CLOSED {
        let l = RelayLink::new(h1.clone(), h2.clone(), p).unwrap();
        let c = aber(&l, Modulation::BPSK).unwrap().value;
        let q = aber_quadrature(&l, Modulation::BPSK).unwrap();
        assert!((c - q).abs() <= 1e-6, "{}", p.name());
    }
}

#[test]
fn protocol_ordering_of_aber() {
    for &fx in &INTEGER_FIXTURES {
        for &db in &[0.0, 10.0, 20.0, 30.0, 40.0] {
            let v = |p| aber(&link(fx, db, p), Modulation::BPSK).unwrap().value;
            let df = v(Protocol::Df);
            let c0 = v(Protocol::CsiAf(CsiMode::Approximate));
            let fx_ = v(Protocol::FixedAf(Gain::Auto));
            assert!(df <= c0 && c0 <= fx_, "{fx:?} {db}: {df} {c0} {fx_}");
        }
    }
}

#[test]
fn aber_decreases_to_zero() {
    for &p in &CLOSED {
        let mut prev = 0.5;
        for db in (0..=60).step_by(5) {
            let v = aber(&link((3.0, 2.0, 1.0), db as f64, p), Modulation::BPSK)
                .unwrap()
                .value;
            assert!(v > 0.0 && v < prev, "{} {db}", p.name());
            prev = v;
        }
        assert!(prev < 1e-4);
    }
}

#[test]
fn csi_exact_aber_exceeds_approximation() {
    let l1 = link((4.0, 2.0, 1.0), 20.0, Protocol::CsiAf(CsiMode::Exact));
    let l0 = link((4.0, 2.0, 1.0), 20.0, Protocol::CsiAf(CsiMode::Approximate));
    let a1 = aber(&l1, Modulation::BPSK).unwrap();
    assert_eq!(a1.method, AberMethod::Quadrature);
    assert!(a1.value > aber(&l0, Modulation::BPSK).unwrap().value);
}

#[test]
fn numeric_regime_uses_quadrature() {
    let l = link((4.2, 2.3, 1.0), 20.0, Protocol::Df);
    let a = aber(&l, Modulation::BPSK).unwrap();
    assert_eq!(a.method, AberMethod::Quadrature);
    assert!(aber_df(&l, Modulation::BPSK).is_err());
    assert!(a.value > 0.0 && a.value < 0.5);
}

#[test]
fn bound_regime_aber_is_an_upper_bound() {
    for &p in &CLOSED {
        let l = link((4.0, 2.0, 2.0), 30.0, p);
        let b = aber(&l, Modulation::BPSK).unwrap();
        let exact = aber_from_cdf(|z| l.cdf_numeric(z), Modulation::BPSK).unwrap();
        assert!(b.value >= exact, "{}", p.name());
    }
}
