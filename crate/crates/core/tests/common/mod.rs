#![allow(dead_code)]

use fso_relay_core::mgfit::fit_gamma_gamma;
use fso_relay_core::relay::{CsiMode, Gain, Protocol, RelayLink};
use fso_relay_core::{db_to_linear, GammaGammaParams, HopChannel, Pointing};

/// (α, β, ξ²) turbulence/pointing fixtures that satisfy the integer condition.
pub const INTEGER_FIXTURES: [(f64, f64, f64); 4] = [
    (4.0, 2.0, 1.0),
    (3.0, 2.0, 1.0),
    (5.0, 3.0, 2.0),
    (4.0, 3.0, 1.0),
];

pub const GRID_DB: [f64; 4] = [0.0, 10.0, 20.0, 30.0];

pub const PROTOCOLS: [Protocol; 4] = [
    Protocol::Df,
    Protocol::CsiAf(CsiMode::Approximate),
    Protocol::CsiAf(CsiMode::Exact),
    Protocol::FixedAf(Gain::Auto),
];

pub fn hop(alpha: f64, beta: f64, xi_sq: f64, db: f64) -> HopChannel {
    let mg = fit_gamma_gamma(GammaGammaParams::new(alpha, beta).unwrap(), 10).unwrap();
    let p = Pointing::from_geometry(xi_sq, 0.1, 1.0).unwrap();
    HopChannel::new(mg, p, db_to_linear(db)).unwrap()
}

pub fn link(fx: (f64, f64, f64), db: f64, protocol: Protocol) -> RelayLink {
    let h = hop(fx.0, fx.1, fx.2, db);
    RelayLink::new(h.clone(), h, protocol).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
