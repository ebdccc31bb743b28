//! Modified Bessel function of the second kind, K_ν(x), real order.
//!
//! The order is split as ν = n + μ with |μ| ≤ 1/2. K_μ and K_{μ+1} come from
//! Temme's series for x < 2 and from Steed's continued fraction (CF2) for
//! x ≥ 2. Forward recurrence then reaches K_ν. The recurrence runs on a
//! rescaled pair so large orders at small arguments do not overflow before
//! the logarithm is taken.

use core::f64::consts::PI;

use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const CROSSOVER: f64 = 2.0;
/// Below this argument the leading small-x term is used in log form.
const TINY_ARG: f64 = 1e-100;
const RESCALE: f64 = 1e250;

/// K_ν(x). Fails with [`Error::Overflow`] when the value exceeds `f64`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let v = libm::exp(ln_bessel_k(nu, x)?);
    if v.is_infinite() {
        return Err(Error::Overflow { what: "bessel_k" });
    }
    Ok(v)
}

/// e^x K_ν(x).
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    let v = libm::exp(ln_bessel_k(nu, x)? + x);
    if v.is_infinite() {
        return Err(Error::Overflow {
            what: "bessel_k_scaled",
        });
    }
    Ok(v)
}

/// ln K_ν(x), finite for every x > 0.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "bessel_k",
            value: x,
        });
    }
    if !nu.is_finite() {
        return Err(Error::Domain {
            what: "bessel_k order",
            value: nu,
        });
    }
    let nu = libm::fabs(nu);
    if x < TINY_ARG {
        return Ok(small_argument_log(nu, x));
    }
    let n = libm::floor(nu + 0.5);
    let mu = nu - n;
    let (k_mu, k_mu1, ln_shift) = if x < CROSSOVER {
        let (a, b) = temme(mu, x)?;
        (a, b, 0.0)
    } else {
        let (a, b) = steed(mu, x)?;
        (a, b, -x)
    };
    if n == 0.0 {
        return Ok(libm::log(k_mu) + ln_shift);
    }
    let two_over_x = 2.0 / x;
    let mut lo = k_mu;
    let mut hi = k_mu1;
    let mut ln_scale = ln_shift;
    let mut order = mu + 1.0;
    for _ in 1..(n as u64) {
        let next = order * two_over_x * hi + lo;
        lo = hi;
        hi = next;
        order += 1.0;
        if hi > RESCALE {
            lo /= RESCALE;
            hi /= RESCALE;
            ln_scale += libm::log(RESCALE);
        }
    }
    Ok(libm::log(hi) + ln_scale)
}

/// Leading term: K_0 ≈ −ln(x/2) − γ, K_ν ≈ Γ(ν)/2 · (2/x)^ν.
fn small_argument_log(nu: f64, x: f64) -> f64 {
    if nu == 0.0 {
        libm::log(-libm::log(0.5 * x) - 0.577_215_664_901_532_9)
    } else {
        libm::lgamma(nu) - core::f64::consts::LN_2 + nu * libm::log(2.0 / x)
    }
}

/// (1/Γ(1+μ), 1/Γ(1−μ), γ₁, γ₂) for |μ| ≤ 1/2.
fn gamma_aux(mu: f64) -> (f64, f64, f64, f64) {
    let gampl = 1.0 / libm::tgamma(1.0 + mu);
    let gammi = 1.0 / libm::tgamma(1.0 - mu);
    let gam2 = 0.5 * (gammi + gampl);
    let gam1 = if libm::fabs(mu) < 1e-4 {
        // 1/Γ(1+z) = 1 + γz + c₂z² + c₃z³ + …
        -(0.577_215_664_901_532_9 - 0.042_002_635_034_095_2 * mu * mu)
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    (gampl, gammi, gam1, gam2)
}

fn temme(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if libm::fabs(pimu) < EPS {
        1.0
    } else {
        pimu / libm::sin(pimu)
    };
    let d = -libm::log(x2);
    let e = mu * d;
    let fact2 = if libm::fabs(e) < EPS {
        1.0
    } else {
        libm::sinh(e) / e
    };
    let (gampl, gammi, gam1, gam2) = gamma_aux(mu);
    let mut ff = fact * (gam1 * libm::cosh(e) + gam2 * fact2 * d);
    let mut sum = ff;
    let e = libm::exp(e);
    let mut p = 0.5 * e / gampl;
    let mut q = 0.5 / (e * gammi);
    let mut c = 1.0;
    let d = x2 * x2;
    let mut sum1 = p;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= d / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if libm::fabs(del) < libm::fabs(sum) * EPS {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::NonConvergence {
        what: "bessel_k series",
    })
}

/// Returns (e^x K_μ(x), e^x K_{μ+1}(x)).
fn steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..=MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if libm::fabs(dels / s) < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "bessel_k continued fraction",
        });
    }
    h *= a1;
    let k_mu = libm::sqrt(PI / (2.0 * x)) / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    Ok((k_mu, k_mu1))
}
