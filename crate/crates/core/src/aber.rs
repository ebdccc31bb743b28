//! Average bit-error rate.
//!
//! The ABER of a kernel (P, Q) is
//! Q^P/(2Γ(P)) ∫₀^∞ z^{P−1} e^{−Qz} F(z) dz
//! with F the end-to-end CDF. Writing F = M₁M₂ − S turns every closed form
//! into M₁M₂/2 minus a finite sum of kernel moments of S.

use alloc::vec::Vec;

use crate::hop::Regime;
use crate::quad::{integrate_positive_axis, Tolerance};
use crate::relay::{ccdf_parts, expansions, CsiMode, Protocol, RelayLink};
use crate::specfun::{
    erfc, gauss_2f1, ln_binomial, ln_gamma, ln_kummer_u_positive, regularized_upper_inc_gamma,
};
use crate::sum::TermSum;
use crate::{Error, Result};

const LN_2: f64 = core::f64::consts::LN_2;
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// Tolerance of [`aber_quadrature`].
pub const QUAD_TOL: Tolerance = Tolerance::new(1e-14, 1e-10);

/// Kernel exponent P and rate Q of the conditional error probability
/// Γ(P, Qγ)/(2Γ(P)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulation {
    p: f64,
    q: f64,
}

impl Modulation {
    /// Coherent BPSK, (P, Q) = (1/2, 1).
    pub const BPSK: Modulation = Modulation { p: 0.5, q: 1.0 };

    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "modulation P",
                value: p,
            });
        }
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "modulation Q",
                value: q,
            });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Conditional bit-error probability at SNR γ.
    pub fn conditional_ber(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.5;
        }
        if self.p == 0.5 {
            return 0.5 * erfc(libm::sqrt(self.q * gamma));
        }
        // only fails for non-finite input, which is excluded above
        0.5 * regularized_upper_inc_gamma(self.p, self.q * gamma).unwrap_or(0.0)
    }

    /// ln[Q^P/(2Γ(P))].
    fn ln_norm(&self) -> f64 {
        self.p * libm::log(self.q) - LN_2 - ln_gamma(self.p)
    }
}

impl Default for Modulation {
    fn default() -> Self {
        Self::BPSK
    }
}

/// How an ABER value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AberMethod {
    /// Finite sum; exact or, in the bound regime, an upper bound.
    ClosedForm,
    /// Numeric integral over the CDF.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AberValue {
    pub value: f64,
    pub method: AberMethod,
    pub regime: Regime,
}

/// ABER of any CDF by adaptive quadrature.
pub fn aber_from_cdf<F>(mut cdf: F, m: Modulation) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let ln_norm = m.ln_norm();
    let mut err = None;
    let r = integrate_positive_axis(
        |z| {
            let f = match cdf(z) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    return 0.0;
                }
            };
            if f <= 0.0 {
                return 0.0;
            }
            libm::exp(ln_norm + (m.p - 1.0) * libm::log(z) - m.q * z) * f
        },
        QUAD_TOL,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// ABER by quadrature over the link CDF (closed form where the regime
/// allows it, integral form otherwise).
pub fn aber_quadrature(link: &RelayLink, m: Modulation) -> Result<f64> {
    aber_from_cdf(|z| Ok(link.cdf(z)?.value), m)
}

/// Closed form when one exists, quadrature otherwise.
pub fn aber(link: &RelayLink, m: Modulation) -> Result<AberValue> {
    let regime = link.regime();
    let closed = regime != Regime::Numeric && link.protocol() != Protocol::CsiAf(CsiMode::Exact);
    if !closed {
        return Ok(AberValue {
            value: aber_quadrature(link, m)?,
            method: AberMethod::Quadrature,
            regime,
        });
    }
    let value = match link.protocol() {
        Protocol::CsiAf(_) => aber_csi(link, m)?,
        Protocol::FixedAf(_) => aber_fixed(link, m)?,
        Protocol::Df => aber_df(link, m)?,
    };
    Ok(AberValue {
        value,
        method: AberMethod::ClosedForm,
        regime,
    })
}

fn require_integer(link: &RelayLink) -> Result<()> {
    if link.regime() == Regime::Numeric {
        return Err(Error::IntegerCondition {
            what: "closed-form ABER needs integer shapes on both hops",
        });
    }
    Ok(())
}

fn finish(half_mass: f64, s: TermSum) -> f64 {
    libm::fmin(0.5, libm::fmax(0.0, half_mass - s.total()))
}

/// CSI-assisted AF with q = 0. With ν = p − s + 1, μ = m₂ + r₁ + P,
/// α = λ₁ + λ₂ + Q and β = 2√(λ₁λ₂) each term is
/// 2K C₁ Ξ₂ C(r₁,s) C(m₂−1,p) (λ₁/λ₂)^{ν/2} √π (2β)^{|ν|}
/// Γ(μ+|ν|)Γ(μ−|ν|)/(Γ(μ+½)(α+β)^{μ+|ν|})
/// ₂F₁(μ+|ν|, |ν|+½; μ+½; (α−β)/(α+β)), K = Q^P/(2Γ(P)).
pub fn aber_csi(link: &RelayLink, m: Modulation) -> Result<f64> {
    if link.protocol() != Protocol::CsiAf(CsiMode::Approximate) {
        return Err(Error::Unsupported {
            what: "closed-form CSI ABER exists only for q = 0",
        });
    }
    require_integer(link)?;
    let (e1, e2) = expansions(link)?;
    let base = m.ln_norm() + LN_2;
    let mut s = TermSum::new();
    let mut cache: Vec<Option<f64>> = Vec::new();
    for t1 in &e1.terms {
        let parts = ccdf_parts(t1);
        for t2 in &e2.terms {
            let (l1, l2) = (t1.rate, t2.rate);
            let alpha = l1 + l2 + m.q;
            let beta = 2.0 * libm::sqrt(l1 * l2);
            let z = (alpha - beta) / (alpha + beta);
            let (ln_ab, ln_2b) = (libm::log(alpha + beta), libm::log(2.0 * beta));
            let half_ratio = 0.5 * (libm::log(l1) - libm::log(l2));
            for &(r1, c1) in &parts {
                let mu = (t2.shape + r1) as f64 + m.p;
                cache.clear();
                for sidx in 0..=r1 {
                    for p in 0..t2.shape {
                        let nu = p as i64 - sidx as i64 + 1;
                        let idx = nu.unsigned_abs() as usize;
                        let nn = idx as f64;
                        debug_assert!(mu - nn >= r1 as f64 + m.p);
                        if cache.len() <= idx {
                            cache.resize(idx + 1, None);
                        }
                        let moment = match cache[idx] {
                            Some(v) => v,
                            None => {
                                let f = gauss_2f1(mu + nn, nn + 0.5, mu + 0.5, z)?;
                                let v =
                                    LN_SQRT_PI + nn * ln_2b + ln_gamma(mu + nn) + ln_gamma(mu - nn)
                                        - ln_gamma(mu + 0.5)
                                        - (mu + nn) * ln_ab
                                        + libm::log(f);
                                *cache[idx].insert(v)
                            }
                        };
                        let ln = base
                            + c1
                            + t2.ln_weight
                            + ln_binomial(r1, sidx)
                            + ln_binomial(t2.shape - 1, p)
                            + nu as f64 * half_ratio
                            + moment;
                        s.push(libm::exp(ln));
                    }
                }
            }
        }
    }
    Ok(finish(0.5 * e1.mass() * e2.mass(), s))
}

/// Fixed-gain AF. With n = m₂ − s, B = λ₁λ₂U, α = λ₁ + Q and z = B/α each
/// term is
/// 2K C₁ Ξ₂ C(r₁,s) U^{(m₂+s)/2} (λ₁/λ₂)^{n/2} J,
/// J = Γ(P+r₁+n)Γ(P+r₁)/(2√B) e^{z/2} α^{−μ} W_{−μ,n/2}(z), μ = P + r₁ + (n−1)/2,
/// where e^{z/2}W_{−μ,n/2}(z) = z^{(|n|+1)/2} U(P + r₁ + (n+|n|)/2, 1+|n|, z).
pub fn aber_fixed(link: &RelayLink, m: Modulation) -> Result<f64> {
    let (Protocol::FixedAf(_), Some(u)) = (link.protocol(), link.gain()) else {
        return Err(Error::Unsupported {
            what: "aber_fixed on a non-fixed-gain link",
        });
    };
    require_integer(link)?;
    let (e1, e2) = expansions(link)?;
    let base = m.ln_norm() + LN_2;
    let lu = libm::log(u);
    let mut s = TermSum::new();
    for t1 in &e1.terms {
        let parts = ccdf_parts(t1);
        let l1 = t1.rate;
        let alpha = l1 + m.q;
        let ln_alpha = libm::log(alpha);
        for t2 in &e2.terms {
            let l2 = t2.rate;
            let ln_b = libm::log(l1) + libm::log(l2) + lu;
            let z = libm::exp(ln_b - ln_alpha);
            let lz = ln_b - ln_alpha;
            let half_ratio = 0.5 * (libm::log(l1) - libm::log(l2));
            for &(r1, c1) in &parts {
                let pr = m.p + r1 as f64;
                for sidx in 0..=r1 {
                    let n = t2.shape as f64 - sidx as f64;
                    let an = libm::fabs(n);
                    let mu = pr + 0.5 * (n - 1.0);
                    let ln_u = ln_kummer_u_positive(pr + 0.5 * (n + an), 1.0 + an, z)?;
                    let j = ln_gamma(pr + 0.5 * (n + an)) + ln_gamma(pr + 0.5 * (n - an))
                        - LN_2
                        - 0.5 * ln_b
                        - mu * ln_alpha
                        + 0.5 * (an + 1.0) * lz
                        + ln_u;
                    let ln = base
                        + c1
                        + t2.ln_weight
                        + ln_binomial(r1, sidx)
                        + 0.5 * (t2.shape + sidx) as f64 * lu
                        + n * half_ratio
                        + j;
                    s.push(libm::exp(ln));
                }
            }
        }
    }
    Ok(finish(0.5 * e1.mass() * e2.mass(), s))
}

/// DF. Each term is
/// K C₁ C₂ Γ(r₁+r₂+P)/(λ₁+λ₂+Q)^{r₁+r₂+P}.
pub fn aber_df(link: &RelayLink, m: Modulation) -> Result<f64> {
    if link.protocol() != Protocol::Df {
        return Err(Error::Unsupported {
            what: "aber_df on a non-DF link",
        });
    }
    require_integer(link)?;
    let (e1, e2) = expansions(link)?;
    let base = m.ln_norm();
    let mut s = TermSum::new();
    for t1 in &e1.terms {
        let p1 = ccdf_parts(t1);
        for t2 in &e2.terms {
            let ln_a = libm::log(t1.rate + t2.rate + m.q);
            for &(r2, c2) in &ccdf_parts(t2) {
                for &(r1, c1) in &p1 {
                    let k = (r1 + r2) as f64 + m.p;
                    s.push(libm::exp(base + c1 + c2 + ln_gamma(k) - k * ln_a));
                }
            }
        }
    }
    Ok(finish(0.5 * e1.mass() * e2.mass(), s))
}
