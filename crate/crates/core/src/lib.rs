#![no_std]
#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]
//! Performance analysis of all-optical dual-hop relayed free-space optical
//! links.
//!
//! Turbulence is modeled by a mixture-Gamma (MG) irradiance distribution and
//! misalignment by zero-boresight pointing errors. On top of that the crate
//! provides:
//!
//! * [`specfun`]: the real special functions every closed form needs
//!   (incomplete gamma with negative order, real-order Bessel K, Gauss
//!   ₂F₁, Whittaker W, Gauss-Laguerre rules).
//! * [`mgfit`]: mixture-Gamma construction, including the Gauss-Laguerre fit
//!   of the Gamma-Gamma model.
//! * [`hop`]: single-hop SNR statistics (exact, reduced and bounded PDF, CCDF).
//! * [`relay`]: end-to-end CDFs for CSI-assisted AF, fixed-gain AF and DF
//!   relaying, plus outage probability.
//! * [`aber`]: average bit-error rate in closed form and by quadrature.
//! * [`sampling`]: the random-variate side of the Monte Carlo oracle.
//!
//! Everything here is a pure function of its inputs. IO, parallel Monte Carlo
//! estimation and the command-line front-end live in the `fso-relay` crate.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aber;
mod error;
pub mod hop;
pub mod mgfit;
pub mod quad;
pub mod relay;
pub mod sampling;
pub mod specfun;
mod sum;

pub use aber::Modulation;
pub use error::{Error, Result};
pub use hop::{HopChannel, Pointing};
pub use mgfit::{GammaGammaParams, MixtureGamma};
pub use relay::{CsiMode, Gain, Protocol, RelayLink};

/// Converts an SNR in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Converts a linear SNR to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * libm::log10(linear)
}
