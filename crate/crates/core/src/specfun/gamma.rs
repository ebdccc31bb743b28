use core::f64::consts::PI;

use super::is_nonpositive_integer;
use crate::{Error, Result};

/// Gamma function Γ(x). Fails at the poles x ∈ {0, −1, −2, …}.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            what: "gamma",
            value: x,
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            what: "gamma",
            at: x,
        });
    }
    let g = libm::tgamma(x);
    if g.is_infinite() {
        return Err(Error::Overflow { what: "gamma" });
    }
    Ok(g)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma(x)
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    // exact up to 20!, lgamma beyond
    const TABLE: [f64; 21] = {
        let mut t = [0.0; 21];
        let mut f = 1.0f64;
        let mut i = 1;
        while i < 21 {
            f *= i as f64;
            t[i] = f;
            i += 1;
        }
        t[0] = 1.0;
        t
    };
    if (n as usize) < TABLE.len() {
        libm::log(TABLE[n as usize])
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

pub(crate) fn ln_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            what: "digamma",
            value: x,
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            what: "digamma",
            at: x,
        });
    }
    if x < 0.5 {
        // ψ(1−x) − ψ(x) = π cot(πx)
        return Ok(digamma(1.0 - x)? - PI / libm::tan(PI * x));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(acc + libm::log(x) - 0.5 * inv - tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn factorial_identity() {
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        for n in 1..15u32 {
            let f: f64 = (1..n).map(|k| k as f64).product();
            assert!(rel(gamma(n as f64).unwrap(), f) < 1e-14);
        }
    }

    #[test]
    fn half_integer_and_reference_values() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-15);
        // 40-digit reference values
        assert!(rel(gamma(3.7).unwrap(), 4.1706517837966031654) < 1e-13);
        assert!(rel(gamma(-2.5).unwrap(), -0.94530872048294188123) < 1e-13);
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(x), Err(Error::Pole { .. })));
            assert!(matches!(digamma(x), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn ln_factorial_matches_lgamma() {
        for n in 0..40u32 {
            assert!((ln_factorial(n) - libm::lgamma(n as f64 + 1.0)).abs() < 1e-12);
        }
        assert!((ln_binomial(6, 2) - 15f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn digamma_reference_values() {
        let cases = [
            (0.25, -4.2274535333762654081),
            (1.0, -0.57721566490153286061),
            (3.7, 1.1671535393615114409),
            (-2.5, 1.1031566406452431872),
            (12.2, 2.4598928348171609366),
            (1e-3, -1000.5755719318103005),
        ];
        for (x, want) in cases {
            assert!(rel(digamma(x).unwrap(), want) < 1e-13, "psi({x})");
        }
    }
}
