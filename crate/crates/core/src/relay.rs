//! End-to-end SNR distributions of dual-hop relaying.
//!
//! * CSI-assisted AF: γ = γ₁γ₂/(γ₁ + γ₂ + q), q ∈ {0, 1}
//! * fixed-gain AF: γ = γ₁γ₂/(γ₂ + U)
//! * DF: γ = min(γ₁, γ₂)
//!
//! Closed forms write the CDF as M₁M₂ − S(x), where S is the mass of the
//! product of the two hop expansions on {γ ≥ x} and M_j the expansion mass.
//! In the exact regime M_j = 1. With the PDF bound M_j > 1 and M₁M₂ − S(x)
//! is the bound measure of the outage region, an upper bound on the CDF.

use alloc::vec::Vec;

use crate::hop::{ErlangTerm, Expansion, HopChannel, Regime};
use crate::quad::{integrate_positive_axis, Tolerance};
use crate::specfun::{ln_bessel_k, ln_binomial, ln_factorial, ln_gamma, ln_upper_inc_gamma};
use crate::sum::TermSum;
use crate::{Error, Result};

/// Tolerance used by the integral-form oracle.
pub const NUMERIC_TOL: Tolerance = Tolerance::new(1e-13, 1e-11);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiMode {
    /// q = 0, the usual high-SNR approximation.
    Approximate,
    /// q = 1.
    Exact,
}

impl CsiMode {
    pub fn q(&self) -> f64 {
        match self {
            CsiMode::Approximate => 0.0,
            CsiMode::Exact => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    /// U = 1/E[1/(1+γ₁)] from the first hop.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    CsiAf(CsiMode),
    FixedAf(Gain),
    Df,
}

impl Protocol {
    /// Short name: csi0, csi1, fixed or df.
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::CsiAf(CsiMode::Approximate) => "csi0",
            Protocol::CsiAf(CsiMode::Exact) => "csi1",
            Protocol::FixedAf(_) => "fixed",
            Protocol::Df => "df",
        }
    }
}

/// A CDF value with the path that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfValue {
    pub value: f64,
    pub method: Regime,
}

/// Two hops plus a protocol. An automatic fixed gain is resolved once here.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayLink {
    hop1: HopChannel,
    hop2: HopChannel,
    protocol: Protocol,
    gain: Option<f64>,
}

impl RelayLink {
    pub fn new(hop1: HopChannel, hop2: HopChannel, protocol: Protocol) -> Result<Self> {
        let gain = match protocol {
            Protocol::FixedAf(Gain::Fixed(u)) => {
                if !(u > 0.0 && u.is_finite()) {
                    return Err(Error::InvalidParameter {
                        what: "fixed gain U",
                        value: u,
                    });
                }
                Some(u)
            }
            Protocol::FixedAf(Gain::Auto) => Some(match hop1.regime() {
                Regime::Closed => fixed_gain(&hop1)?,
                _ => fixed_gain_numeric(&hop1)?,
            }),
            _ => None,
        };
        Ok(Self {
            hop1,
            hop2,
            protocol,
            gain,
        })
    }

    pub fn hop1(&self) -> &HopChannel {
        &self.hop1
    }

    pub fn hop2(&self) -> &HopChannel {
        &self.hop2
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    /// The resolved gain U for fixed-gain links.
    pub fn gain(&self) -> Option<f64> {
        self.gain
    }

    /// Numeric if either hop is, else bound if either hop is.
    pub fn regime(&self) -> Regime {
        match (self.hop1.regime(), self.hop2.regime()) {
            (Regime::Numeric, _) | (_, Regime::Numeric) => Regime::Numeric,
            (Regime::Bound, _) | (_, Regime::Bound) => Regime::Bound,
            _ => Regime::Closed,
        }
    }

    /// End-to-end SNR for one pair of hop SNRs.
    pub fn end_to_end(&self, g1: f64, g2: f64) -> f64 {
        match self.protocol {
            Protocol::CsiAf(m) => g1 * g2 / (g1 + g2 + m.q()),
            Protocol::FixedAf(_) => g1 * g2 / (g2 + self.gain.unwrap_or(1.0)),
            Protocol::Df => libm::fmin(g1, g2),
        }
    }

    /// CDF by the closed form when the regime allows it, else numerically.
    pub fn cdf(&self, x: f64) -> Result<CdfValue> {
        let method = self.regime();
        let value = match method {
            Regime::Numeric => self.cdf_numeric(x)?,
            _ => self.cdf_closed(x)?,
        };
        Ok(CdfValue { value, method })
    }

    /// Closed-form CDF (exact or bound regime).
    pub fn cdf_closed(&self, x: f64) -> Result<f64> {
        match self.protocol {
            Protocol::CsiAf(_) => cdf_csi(self, x),
            Protocol::FixedAf(_) => cdf_fixed(self, x),
            Protocol::Df => cdf_df(self, x),
        }
    }

    /// CDF from the defining integrals with the exact hop PDF and CCDF.
    pub fn cdf_numeric(&self, x: f64) -> Result<f64> {
        cdf_numeric(self, x)
    }

    /// P(γ < γ_th).
    pub fn outage(&self, gamma_th: f64) -> Result<CdfValue> {
        if !(gamma_th > 0.0) {
            return Err(Error::Domain {
                what: "gamma_th",
                value: gamma_th,
            });
        }
        self.cdf(gamma_th)
    }
}

/// Closed-form U = [Σ Ξ Γ(m) e^{λ} Γ(1−m, λ)]^{−1} under the integer
/// condition.
pub fn fixed_gain(hop1: &HopChannel) -> Result<f64> {
    if hop1.regime() != Regime::Closed {
        return Err(Error::IntegerCondition {
            what: "fixed_gain needs the integer condition on hop 1",
        });
    }
    let exp = hop1.expansion()?;
    let mut s = TermSum::new();
    for t in &exp.terms {
        let m = t.shape as f64;
        s.push(libm::exp(
            t.ln_weight + ln_gamma(m) + t.rate + ln_upper_inc_gamma(1.0 - m, t.rate)?,
        ));
    }
    Ok(1.0 / s.total())
}

/// U = 1/E[1/(1+γ₁)] by quadrature over the exact hop density.
pub fn fixed_gain_numeric(hop1: &HopChannel) -> Result<f64> {
    let mut err = None;
    let r = integrate_positive_axis(
        |x| match hop1.snr_pdf(x) {
            Ok(v) => v / (1.0 + x),
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        NUMERIC_TOL,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(1.0 / r.value)
}

fn check_x(x: f64) -> Result<()> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain {
            what: "cdf argument",
            value: x,
        });
    }
    Ok(())
}

pub(crate) fn expansions(link: &RelayLink) -> Result<(Expansion, Expansion)> {
    Ok((link.hop1.expansion()?, link.hop2.expansion()?))
}

fn finish(m1m2: f64, s: f64) -> f64 {
    libm::fmin(1.0, libm::fmax(0.0, m1m2 - s))
}

/// (r₁, ln[Ξ₁ (m₁−1)!/(r₁! λ₁^{m₁−r₁})]) for r₁ < m₁.
pub(crate) fn ccdf_parts(t: &ErlangTerm) -> Vec<(u32, f64)> {
    let ll = libm::log(t.rate);
    (0..t.shape)
        .map(|r1| {
            (
                r1,
                t.ln_weight + ln_factorial(t.shape - 1)
                    - ln_factorial(r1)
                    - (t.shape - r1) as f64 * ll,
            )
        })
        .collect()
}

/// CSI-assisted AF CDF. With v = x(x+q), ν = p − s + 1:
/// S = Σ C₁ Ξ₂ C(r₁,s) C(m₂−1,p) x^{r₁−s+m₂−1−p} v^s e^{−(λ₁+λ₂)x}
///     · 2 (λ₁v/λ₂)^{ν/2} K_ν(2√(λ₁λ₂v)).
pub fn cdf_csi(link: &RelayLink, x: f64) -> Result<f64> {
    let Protocol::CsiAf(mode) = link.protocol else {
        return Err(Error::Unsupported {
            what: "cdf_csi on a non-CSI link",
        });
    };
    check_x(x)?;
    let (e1, e2) = expansions(link)?;
    let m1m2 = e1.mass() * e2.mass();
    if x == 0.0 {
        return Ok(0.0);
    }
    let v = x * (x + mode.q());
    let (lx, lv) = (libm::log(x), libm::log(v));
    let mut s = TermSum::new();
    let mut k_cache: Vec<Option<f64>> = Vec::new();
    for t1 in &e1.terms {
        let parts = ccdf_parts(t1);
        for t2 in &e2.terms {
            let (l1, l2) = (t1.rate, t2.rate);
            let arg = 2.0 * libm::sqrt(l1 * l2 * v);
            let half_ratio = 0.5 * (libm::log(l1) + lv - libm::log(l2));
            k_cache.clear();
            for &(r1, c1) in &parts {
                for sidx in 0..=r1 {
                    for p in 0..t2.shape {
                        let nu = p as i64 - sidx as i64 + 1;
                        let idx = nu.unsigned_abs() as usize;
                        if k_cache.len() <= idx {
                            k_cache.resize(idx + 1, None);
                        }
                        let lk = match k_cache[idx] {
                            Some(v) => v,
                            None => *k_cache[idx].insert(ln_bessel_k(idx as f64, arg)?),
                        };
                        let ln = c1
                            + t2.ln_weight
                            + ln_binomial(r1, sidx)
                            + ln_binomial(t2.shape - 1, p)
                            + (r1 as f64 - sidx as f64 + t2.shape as f64 - 1.0 - p as f64) * lx
                            + sidx as f64 * lv
                            - (l1 + l2) * x
                            + core::f64::consts::LN_2
                            + nu as f64 * half_ratio
                            + lk;
                        s.push(libm::exp(ln));
                    }
                }
            }
        }
    }
    Ok(finish(m1m2, s.total()))
}

/// Fixed-gain AF CDF. With w = xU, n = m₂ − s:
/// S = Σ C₁ Ξ₂ C(r₁,s) x^{r₁−s} w^s e^{−λ₁x} · 2 (λ₁w/λ₂)^{n/2} K_n(2√(λ₁λ₂w)).
pub fn cdf_fixed(link: &RelayLink, x: f64) -> Result<f64> {
    let (Protocol::FixedAf(_), Some(u)) = (link.protocol, link.gain) else {
        return Err(Error::Unsupported {
            what: "cdf_fixed on a non-fixed-gain link",
        });
    };
    check_x(x)?;
    let (e1, e2) = expansions(link)?;
    let m1m2 = e1.mass() * e2.mass();
    if x == 0.0 {
        return Ok(0.0);
    }
    let w = x * u;
    let (lx, lw) = (libm::log(x), libm::log(w));
    let mut s = TermSum::new();
    for t1 in &e1.terms {
        for (r1, c1) in ccdf_parts(t1) {
            for t2 in &e2.terms {
                let (l1, l2) = (t1.rate, t2.rate);
                let arg = 2.0 * libm::sqrt(l1 * l2 * w);
                let half_ratio = 0.5 * (libm::log(l1) + lw - libm::log(l2));
                for sidx in 0..=r1 {
                    let n = t2.shape as f64 - sidx as f64;
                    let ln = c1
                        + t2.ln_weight
                        + ln_binomial(r1, sidx)
                        + (r1 - sidx) as f64 * lx
                        + sidx as f64 * lw
                        - l1 * x
                        + core::f64::consts::LN_2
                        + n * half_ratio
                        + ln_bessel_k(n, arg)?;
                    s.push(libm::exp(ln));
                }
            }
        }
    }
    Ok(finish(m1m2, s.total()))
}

/// DF CDF 1 − F̄₁F̄₂, written as M₁A₂ + M₂A₁ − A₁A₂ with A_j the lower mass.
pub fn cdf_df(link: &RelayLink, x: f64) -> Result<f64> {
    if link.protocol != Protocol::Df {
        return Err(Error::Unsupported {
            what: "cdf_df on a non-DF link",
        });
    }
    check_x(x)?;
    let (e1, e2) = expansions(link)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let (a1, a2) = (e1.lower_mass(x)?, e2.lower_mass(x)?);
    let (m1, m2) = (e1.mass(), e2.mass());
    Ok(libm::fmin(
        1.0,
        libm::fmax(0.0, m1 * a2 + m2 * a1 - a1 * a2),
    ))
}

/// CDF from the integral forms with the exact (any real parameter) PDF and
/// CCDF of each hop:
/// * CSI: 1 − ∫₀^∞ F̄₁(x + x(x+q)/y) f₂(x+y) dy
/// * fixed: 1 − ∫₀^∞ F̄₁(x + xU/y) f₂(y) dy
/// * DF: 1 − F̄₁(x) F̄₂(x)
pub fn cdf_numeric(link: &RelayLink, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let (h1, h2) = (&link.hop1, &link.hop2);
    let complement = match link.protocol {
        Protocol::Df => h1.snr_ccdf_numeric(x)? * h2.snr_ccdf_numeric(x)?,
        Protocol::CsiAf(mode) => {
            let v = x * (x + mode.q());
            integral(|y| Ok(h1.snr_ccdf_numeric(x + v / y)? * h2.snr_pdf(x + y)?))?
        }
        Protocol::FixedAf(_) => {
            let w = x * link.gain.unwrap_or(1.0);
            integral(|y| Ok(h1.snr_ccdf_numeric(x + w / y)? * h2.snr_pdf(y)?))?
        }
    };
    Ok(libm::fmin(1.0, libm::fmax(0.0, 1.0 - complement)))
}

fn integral<F: FnMut(f64) -> Result<f64>>(mut f: F) -> Result<f64> {
    let mut err = None;
    let r = integrate_positive_axis(
        |y| match f(y) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        NUMERIC_TOL,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    fn unit(p: Protocol) -> RelayLink {
        RelayLink::new(HopChannel::unit(), HopChannel::unit(), p).unwrap()
    }

    #[test]
    fn unit_channel_closed_forms() {
        let df = unit(Protocol::Df);
        let csi = unit(Protocol::CsiAf(CsiMode::Approximate));
        for &x in &[1e-4, 0.1, 1.0, 3.0] {
            assert!((df.cdf_closed(x).unwrap() - (1.0 - (-2.0 * x).exp())).abs() < 1e-14);
            let want = 1.0 - 2.0 * x * (-2.0 * x).exp() * bessel_k(1.0, 2.0 * x).unwrap();
            assert!((csi.cdf_closed(x).unwrap() - want).abs() < 1e-13, "x={x}");
        }
        // 20-digit reference for 1 − 2e^{−2}K₁(2)
        assert!((csi.cdf_closed(1.0).unwrap() - 0.96214242253844468085).abs() < 1e-13);
    }

    #[test]
    fn unit_fixed_gain() {
        // 1/(e·E₁(1)) at 20 digits
        let u = fixed_gain(&HopChannel::unit()).unwrap();
        assert!((u - 1.6768750281787008684).abs() < 1e-12);
        assert!((fixed_gain_numeric(&HopChannel::unit()).unwrap() - u).abs() < 1e-9);
        let link = unit(Protocol::FixedAf(Gain::Auto));
        assert_eq!(link.gain(), Some(u));
        for &x in &[0.01, 1.0, 4.0] {
            let z = 2.0 * (u * x).sqrt();
            let want = 1.0 - z * (-x).exp() * bessel_k(1.0, z).unwrap();
            assert!((link.cdf_closed(x).unwrap() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn gain_grows_with_snr() {
        let u1 = fixed_gain(&HopChannel::unit().with_gamma_bar(10.0).unwrap()).unwrap();
        let u2 = fixed_gain(&HopChannel::unit().with_gamma_bar(1e4).unwrap()).unwrap();
        assert!(u2 > u1 && u1 > 1.6768);
    }

    #[test]
    fn zero_and_limits() {
        for p in [
            Protocol::Df,
            Protocol::CsiAf(CsiMode::Exact),
            Protocol::FixedAf(Gain::Auto),
        ] {
            let l = unit(p);
            assert_eq!(l.cdf_closed(0.0).unwrap(), 0.0);
            assert!(l.cdf_closed(1e-12).unwrap() < 1e-9);
            assert!(l.cdf_closed(80.0).unwrap() > 1.0 - 1e-9);
            assert!(l.cdf_closed(-1.0).is_err());
        }
    }

    #[test]
    fn numeric_matches_unit_closed_forms() {
        for p in [
            Protocol::Df,
            Protocol::CsiAf(CsiMode::Approximate),
            Protocol::CsiAf(CsiMode::Exact),
            Protocol::FixedAf(Gain::Auto),
        ] {
            let l = unit(p);
            for &x in &[0.05, 1.0, 6.0] {
                let a = l.cdf_closed(x).unwrap();
                let b = l.cdf_numeric(x).unwrap();
                assert!((a - b).abs() < 1e-9, "{} x={x}: {a} vs {b}", p.name());
            }
        }
    }

    #[test]
    fn outage_df_unit() {
        let o = unit(Protocol::Df).outage(1.0).unwrap();
        assert!((o.value - (1.0 - (-2f64).exp())).abs() < 1e-14);
        assert_eq!(o.method, Regime::Closed);
        assert!(unit(Protocol::Df).outage(0.0).is_err());
    }

    #[test]
    fn wrong_protocol_is_rejected() {
        let l = unit(Protocol::Df);
        assert!(cdf_csi(&l, 1.0).is_err());
        assert!(cdf_fixed(&l, 1.0).is_err());
        assert!(RelayLink::new(
            HopChannel::unit(),
            HopChannel::unit(),
            Protocol::FixedAf(Gain::Fixed(0.0))
        )
        .is_err());
    }
}
