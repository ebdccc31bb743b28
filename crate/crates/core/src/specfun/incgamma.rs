//! Upper incomplete gamma function Γ(a, x) for any real `a` and x > 0.
//!
//! Three regimes:
//! * x ≥ max(a + 1, 1.5): Legendre continued fraction (valid for every real `a`).
//! * a ≥ 1, x below that: Γ(a)·(1 − P(a, x)) with P from the lower series.
//! * 0 ≤ a < 1: the split Γ(a,x) = [(Γ(1+a)−1) − (x^a−1)]/a − x^a Σ… which
//!   stays accurate as a → 0 and reduces to E₁ at a = 0.
//! * a < 0: downward recurrence Γ(a,x) = (Γ(a+1,x) − x^a e^{−x})/a from the
//!   fractional part, carried on x^{−a} e^{x} Γ(a,x) so nothing overflows.

use super::{ln_gamma, Accuracy};
use crate::{Error, Result};

const EULER: f64 = 0.577_215_664_901_532_9;
const FPMIN: f64 = 1e-300;

/// Γ(a, x) for real `a` and x > 0.
pub fn upper_inc_gamma(a: f64, x: f64) -> Result<f64> {
    upper_inc_gamma_with(a, x, &Accuracy::default())
}

pub fn upper_inc_gamma_with(a: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    Ok(libm::exp(ln_upper(a, x, acc)?))
}

/// e^x Γ(a, x).
pub fn upper_inc_gamma_scaled(a: f64, x: f64) -> Result<f64> {
    let v = libm::exp(ln_upper(a, x, &Accuracy::default())? + x);
    if v.is_infinite() {
        return Err(Error::Overflow {
            what: "upper_inc_gamma_scaled",
        });
    }
    Ok(v)
}

/// ln Γ(a, x). Γ(a, x) is positive for every real `a` when x > 0.
pub fn ln_upper_inc_gamma(a: f64, x: f64) -> Result<f64> {
    ln_upper(a, x, &Accuracy::default())
}

/// Q(a, x) = Γ(a, x)/Γ(a) for a > 0.
pub fn regularized_upper_inc_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain {
            what: "regularized_upper_inc_gamma",
            value: a,
        });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(libm::exp(
        ln_upper(a, x, &Accuracy::default())? - ln_gamma(a),
    ))
}

fn ln_upper(a: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "upper_inc_gamma",
            value: x,
        });
    }
    if !a.is_finite() {
        return Err(Error::Domain {
            what: "upper_inc_gamma order",
            value: a,
        });
    }
    let ln_x = libm::log(x);
    if x >= libm::fmax(a + 1.0, 1.5) {
        let h = legendre_cf(a, x, acc)?;
        return Ok(a * ln_x - x + libm::log(h));
    }
    if a >= 1.0 {
        let p = lower_regularized_series(a, x, ln_x, acc)?;
        return Ok(ln_gamma(a) + libm::log1p(-p));
    }
    if a >= 0.0 {
        return Ok(libm::log(small_order(a, x, ln_x, acc)?));
    }
    // a < 0, x < 1.5
    let steps = libm::ceil(-a);
    let a0 = a + steps;
    let g0 = small_order(a0, x, ln_x, acc)?;
    let mut h = g0 * libm::exp(x - a0 * ln_x);
    let mut aj = a0;
    for _ in 0..steps as u32 {
        aj -= 1.0;
        h = (x * h - 1.0) / aj;
    }
    if !(h > 0.0) {
        return Err(Error::NonConvergence {
            what: "upper_inc_gamma recurrence",
        });
    }
    Ok(libm::log(h) + a * ln_x - x)
}

/// Lentz evaluation of e^x x^{−a} Γ(a, x).
fn legendre_cf(a: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    let max_iter = acc.max_terms.max(2000);
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=max_iter {
        let fi = i as f64;
        let an = -fi * (fi - a);
        b += 2.0;
        d = an * d + b;
        if libm::fabs(d) < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if libm::fabs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if libm::fabs(del - 1.0) < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        what: "upper_inc_gamma continued fraction",
    })
}

/// P(a, x) = γ(a, x)/Γ(a) by the power series, for a ≥ 1 and x < a + 1.
fn lower_regularized_series(a: f64, x: f64, ln_x: f64, acc: &Accuracy) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut ap = a;
    for _ in 0..acc.max_terms {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term < sum * f64::EPSILON {
            return Ok(sum * libm::exp(a * ln_x - x - ln_gamma(a + 1.0)));
        }
    }
    Err(Error::NonConvergence {
        what: "upper_inc_gamma series",
    })
}

/// Γ(a, x) for 0 ≤ a < 1 and 0 < x < 2.
fn small_order(a: f64, x: f64, ln_x: f64, acc: &Accuracy) -> Result<f64> {
    let (g1, xa1) = if a == 0.0 {
        (-EULER, ln_x)
    } else {
        (libm::expm1(ln_gamma_1p(a)) / a, libm::expm1(a * ln_x) / a)
    };
    // Σ_{n≥1} (−x)^n / (n! (a+n))
    let mut pow_fact = 1.0;
    let mut sum = 0.0;
    let mut converged = false;
    for n in 1..=acc.max_terms {
        let fname = n as f64;
        pow_fact *= -x / fname;
        let term = pow_fact / (a + fname);
        sum += term;
        if libm::fabs(term) < f64::EPSILON * libm::fabs(sum) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "upper_inc_gamma small-order series",
        });
    }
    let xa = libm::exp(a * ln_x);
    Ok(g1 - xa1 - xa * sum)
}

/// ln Γ(1 + a) without forming 1 + a for tiny `a`.
fn ln_gamma_1p(a: f64) -> f64 {
    if libm::fabs(a) < 1e-2 {
        const Z: [f64; 6] = [
            1.644_934_066_848_226_4,
            1.202_056_903_159_594_3,
            1.082_323_233_711_138_2,
            1.036_927_755_143_369_9,
            1.017_343_061_984_449_1,
            1.008_349_277_381_922_8,
        ];
        let mut s = -EULER * a;
        let mut p = a;
        // lnΓ(1+a) = −γa + Σ_{k≥2} (−1)^k ζ(k) a^k / k
        for (k, z) in Z.iter().enumerate() {
            p *= -a;
            s -= z * p / (k as f64 + 2.0);
        }
        s
    } else {
        libm::lgamma(1.0 + a)
    }
}
