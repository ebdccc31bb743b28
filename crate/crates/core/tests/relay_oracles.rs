mod common;

use common::{hop, link, GRID_DB, INTEGER_FIXTURES, PROTOCOLS};
use fso_relay_core::relay::{fixed_gain, fixed_gain_numeric, CsiMode, Gain, Protocol, RelayLink};

const THRESHOLDS: [f64; 3] = [0.1, 1.0, 10.0];

#[test]
fn closed_form_cdf_matches_integral_form() {
    for &fx in &INTEGER_FIXTURES {
        for &db in &GRID_DB {
            for &p in &PROTOCOLS {
                let l = link(fx, db, p);
                for &x in &THRESHOLDS {
                    let c = l.cdf_closed(x).unwrap();
                    let n = l.cdf_numeric(x).unwrap();
                    assert!(
                        (c - n).abs() <= 1e-6,
                        "{fx:?} {db} dB {} x={x}: {c} vs {n}",
                        p.name()
                    );
                }
            }
        }
    }
}

#[test]
fn asymmetric_hops_match_integral_form() {
    let h1 = hop(4.0, 2.0, 1.0, 25.0);
    let h2 = hop(5.0, 3.0, 2.0, 18.0);
    for &p in &PROTOCOLS {
        for (a, b) in [(&h1, &h2), (&h2, &h1)] {
            let l = RelayLink::new(a.clone(), b.clone(), p).unwrap();
            for &x in &THRESHOLDS {
                let c = l.cdf_closed(x).unwrap();
                let n = l.cdf_numeric(x).unwrap();
                assert!((c - n).abs() <= 1e-8, "{} x={x}: {c} vs {n}", p.name());
            }
        }
    }
}

#[test]
fn explicit_gain_matches_integral_form() {
    let h = hop(3.0, 2.0, 1.0, 20.0);
    let l = RelayLink::new(h.clone(), h, Protocol::FixedAf(Gain::Fixed(40.0))).unwrap();
    assert_eq!(l.gain(), Some(40.0));
    for &x in &THRESHOLDS {
        assert!((l.cdf_closed(x).unwrap() - l.cdf_numeric(x).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn closed_gain_matches_quadrature() {
    for &(a, b, xi) in &INTEGER_FIXTURES {
        for &db in &GRID_DB {
            let h = hop(a, b, xi, db);
            let u = fixed_gain(&h).unwrap();
            assert!(((u - fixed_gain_numeric(&h).unwrap()) / u).abs() < 1e-9);
        }
    }
}

#[test]
fn protocol_ordering_of_outage() {
    for &fx in &INTEGER_FIXTURES {
        for &db in &[0.0, 10.0, 20.0, 30.0, 40.0] {
            let out = |p| link(fx, db, p).outage(1.0).unwrap().value;
            let df = out(Protocol::Df);
            let c0 = out(Protocol::CsiAf(CsiMode::Approximate));
            let c1 = out(Protocol::CsiAf(CsiMode::Exact));
            assert!(
                df <= c0 + 1e-14 && c0 <= c1 + 1e-14,
                "{fx:?} {db}: {df} {c0} {c1}"
            );
        }
    }
}

#[test]
fn outage_decreases_with_snr() {
    for &p in &PROTOCOLS {
        let mut prev = 1.0 + 1e-12;
        for db in (0..=70).step_by(5) {
            let o = link((4.0, 2.0, 1.0), db as f64, p)
                .outage(1.0)
                .unwrap()
                .value;
            assert!(o <= prev + 1e-14, "{} {db}", p.name());
            prev = o;
        }
        assert!(prev < 1e-3);
    }
}

#[test]
fn cdf_is_monotone_in_threshold() {
    for &p in &PROTOCOLS {
        let l = link((5.0, 3.0, 2.0), 25.0, p);
        let mut prev = 0.0;
        for i in 0..30 {
            let x = 10f64.powf(-3.0 + 0.2 * i as f64);
            let f = l.cdf_closed(x).unwrap();
            assert!(f >= prev && f <= 1.0);
            prev = f;
        }
    }
}

#[test]
fn bound_regime_cdf_is_an_upper_bound() {
    for &(a, b, xi) in &[(4.0, 2.0, 2.0), (2.0, 2.0, 2.0)] {
        for &db in &[20.0, 30.0, 40.0] {
            for &p in &PROTOCOLS {
                let l = link((a, b, xi), db, p);
                let c = l.cdf(1.0).unwrap();
                assert_eq!(c.method.label(), "bound");
                assert!(c.value >= l.cdf_numeric(1.0).unwrap(), "{} {db}", p.name());
            }
        }
    }
}
