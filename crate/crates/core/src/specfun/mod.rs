//! Real-valued special functions.
//!
//! All functions are pure; none keep state between calls.

mod bessel;
mod gamma;
mod hyper;
mod incgamma;
mod laguerre;

pub use bessel::{bessel_k, bessel_k_scaled, ln_bessel_k};
pub use gamma::{digamma, gamma, ln_gamma};
pub use hyper::{gauss_2f1, gauss_2f1_with, kummer_u, whittaker_w, whittaker_w_scaled};
pub use incgamma::{
    ln_upper_inc_gamma, regularized_upper_inc_gamma, upper_inc_gamma, upper_inc_gamma_scaled,
    upper_inc_gamma_with,
};
pub use laguerre::gauss_laguerre;

pub(crate) use gamma::{ln_binomial, ln_factorial};
pub(crate) use hyper::ln_kummer_u_positive;

use crate::{Error, Result};

/// Series/iteration controls for the special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    /// Relative stopping tolerance.
    pub rel_tol: f64,
    /// Cap on series terms or continued-fraction steps.
    pub max_terms: usize,
}

impl Accuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-3) {
            return Err(Error::InvalidParameter {
                what: "rel_tol",
                value: rel_tol,
            });
        }
        if max_terms < 50 {
            return Err(Error::InvalidParameter {
                what: "max_terms",
                value: max_terms as f64,
            });
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 500,
        }
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == libm::floor(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_invariants() {
        assert!(Accuracy::new(1e-12, 50).is_ok());
        assert!(Accuracy::new(0.0, 100).is_err());
        assert!(Accuracy::new(1e-2, 100).is_err());
        assert!(Accuracy::new(1e-10, 49).is_err());
    }

    #[test]
    fn erf_is_odd_and_bounded() {
        assert_eq!(erf(0.0), 0.0);
        for &x in &[1e-6, 0.1, 0.7, 1.3, 3.0, 8.0, 40.0] {
            assert_eq!(erf(-x), -erf(x));
            assert!(erf(x).abs() <= 1.0);
        }
    }

    /// Maclaurin series erf(x) = 2/√π Σ (−1)^n x^{2n+1} / (n!(2n+1)).
    fn erf_maclaurin(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut pow = x;
        let mut fact = 1.0;
        for n in 0..40 {
            if n > 0 {
                fact *= n as f64;
                pow *= -x * x;
            }
            sum += pow / (fact * (2 * n + 1) as f64);
        }
        2.0 / core::f64::consts::PI.sqrt() * sum
    }

    #[test]
    fn erf_matches_maclaurin_oracle() {
        let v = erf(0.12533);
        assert!((v - erf_maclaurin(0.12533)).abs() < 1e-15);
        assert!((v - 0.14068278180548435717).abs() < 1e-15);
        for &x in &[0.01, 0.5, 1.0, 1.5] {
            assert!((erf(x) - erf_maclaurin(x)).abs() < 1e-14, "x={x}");
        }
    }
}
