//! Single-hop SNR statistics: MG turbulence times zero-boresight pointing
//! loss, scaled by the average SNR.
//!
//! The instantaneous SNR is γ = γ̄·I_a·I_p with I_a drawn from the mixture and
//! I_p = A₀·u^{1/ξ²}. Under the integer condition (ξ² ∈ ℕ⁺, b_i − ξ² ∈ ℕ⁺)
//! its density is a finite sum of Erlang-type terms Ξ x^{m−1} e^{−λx}; the
//! relay and ABER closed forms are all built from that [`Expansion`].

use alloc::vec::Vec;

use crate::mgfit::{MgTerm, MixtureGamma};
use crate::specfun::{erf, ln_factorial, ln_upper_inc_gamma, regularized_upper_inc_gamma};
use crate::sum::TermSum;
use crate::{Error, Result};

/// Pointing loss A₀ = erf(√π r/(√2 w_z))².
pub fn pointing_loss(r: f64, w_z: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain {
            what: "aperture radius",
            value: r,
        });
    }
    if !(w_z > 0.0 && w_z.is_finite()) {
        return Err(Error::Domain {
            what: "beam waist",
            value: w_z,
        });
    }
    let v = erf(libm::sqrt(core::f64::consts::PI) * r / (core::f64::consts::SQRT_2 * w_z));
    Ok(v * v)
}

/// Zero-boresight misalignment parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pointing {
    xi_sq: f64,
    a0: f64,
}

impl Pointing {
    pub fn new(xi_sq: f64, a0: f64) -> Result<Self> {
        if !(xi_sq > 0.0 && xi_sq.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "xi_sq",
                value: xi_sq,
            });
        }
        if !(a0 > 0.0 && a0 <= 1.0) {
            return Err(Error::InvalidParameter {
                what: "A0",
                value: a0,
            });
        }
        Ok(Self { xi_sq, a0 })
    }

    /// A₀ from the aperture radius and beam waist.
    pub fn from_geometry(xi_sq: f64, r: f64, w_z: f64) -> Result<Self> {
        Self::new(xi_sq, pointing_loss(r, w_z)?)
    }

    pub fn xi_sq(&self) -> f64 {
        self.xi_sq
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// E[I_p] = ξ²A₀/(1+ξ²).
    pub fn mean_loss(&self) -> f64 {
        self.xi_sq * self.a0 / (1.0 + self.xi_sq)
    }
}

/// How the closed forms treat a hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Integer condition holds; closed forms are exact.
    Closed,
    /// Some b_i ≤ ξ²; closed forms use the PDF upper bound.
    Bound,
    /// Non-integer parameters; only the numeric paths apply.
    Numeric,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Closed => "closed",
            Regime::Bound => "bound",
            Regime::Numeric => "numeric",
        }
    }
}

/// Density term exp(ln_weight)·x^{shape−1}·e^{−rate·x}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErlangTerm {
    pub ln_weight: f64,
    pub shape: u32,
    pub rate: f64,
}

impl ErlangTerm {
    /// ln of ∫₀^∞ of the term, ln(Ξ (m−1)!/λ^m).
    pub fn ln_mass(&self) -> f64 {
        self.ln_weight + ln_factorial(self.shape - 1) - self.shape as f64 * libm::log(self.rate)
    }
}

/// Erlang-sum form of a hop density (exact or upper bound).
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub terms: Vec<ErlangTerm>,
    /// True when at least one term comes from the PDF bound.
    pub bound: bool,
}

impl Expansion {
    /// Total mass; 1 in the exact regime, above 1 for the bound.
    pub fn mass(&self) -> f64 {
        let mut s = TermSum::new();
        for t in &self.terms {
            s.push(libm::exp(t.ln_mass()));
        }
        s.total()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let lx = libm::log(x);
        let mut s = TermSum::new();
        for t in &self.terms {
            s.push(libm::exp(
                t.ln_weight + (t.shape as f64 - 1.0) * lx - t.rate * x,
            ));
        }
        s.total()
    }

    /// ∫_x^∞ of the density.
    pub fn upper_mass(&self, x: f64) -> Result<f64> {
        let mut s = TermSum::new();
        for t in &self.terms {
            let q = regularized_upper_inc_gamma(t.shape as f64, t.rate * x)?;
            s.push(libm::exp(t.ln_mass()) * q);
        }
        Ok(s.total())
    }

    /// ∫₀^x of the density.
    pub fn lower_mass(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        let mut s = TermSum::new();
        for t in &self.terms {
            let p = lower_regularized(t.shape as f64, t.rate * x)?;
            s.push(libm::exp(t.ln_mass()) * p);
        }
        Ok(s.total())
    }
}

/// P(a, x) without cancellation for small x.
fn lower_regularized(a: f64, x: f64) -> Result<f64> {
    if x < a + 1.0 {
        // series γ(a,x)/Γ(a) = x^a e^{−x}/Γ(a+1) Σ x^n/((a+1)…(a+n))
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut ap = a;
        for _ in 0..1000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term < sum * f64::EPSILON {
                return Ok(sum * libm::exp(a * libm::log(x) - x - libm::lgamma(a + 1.0)));
            }
        }
        Err(Error::NonConvergence {
            what: "lower incomplete gamma series",
        })
    } else {
        Ok(1.0 - regularized_upper_inc_gamma(a, x)?)
    }
}

/// One hop: MG turbulence, pointing loss and average SNR γ̄ (linear).
#[derive(Debug, Clone, PartialEq)]
pub struct HopChannel {
    mg: MixtureGamma,
    pointing: Pointing,
    gamma_bar: f64,
}

impl HopChannel {
    pub fn new(mg: MixtureGamma, pointing: Pointing, gamma_bar: f64) -> Result<Self> {
        if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "gamma_bar",
                value: gamma_bar,
            });
        }
        Ok(Self {
            mg,
            pointing,
            gamma_bar,
        })
    }

    /// γ̄ = P_t·η·Ī/N₀.
    pub fn from_power(
        mg: MixtureGamma,
        pointing: Pointing,
        p_t: f64,
        eta: f64,
        n0: f64,
    ) -> Result<Self> {
        for (what, v) in [
            ("transmit power", p_t),
            ("conversion coefficient", eta),
            ("noise power", n0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { what, value: v });
            }
        }
        let mean = pointing.mean_loss() * mg.mean();
        Self::new(mg, pointing, p_t * eta * mean / n0)
    }

    /// The fixture every formula collapses on: mg = (1, 2, 1), ξ² = 1,
    /// A₀ = 1, γ̄ = 1, giving an Exp(1) SNR.
    pub fn unit() -> Self {
        let mg = MixtureGamma::new(alloc::vec![MgTerm::new(1.0, 2.0, 1.0)]).expect("unit mixture");
        Self {
            mg,
            pointing: Pointing {
                xi_sq: 1.0,
                a0: 1.0,
            },
            gamma_bar: 1.0,
        }
    }

    pub fn mg(&self) -> &MixtureGamma {
        &self.mg
    }

    pub fn pointing(&self) -> Pointing {
        self.pointing
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn with_gamma_bar(&self, gamma_bar: f64) -> Result<Self> {
        Self::new(self.mg.clone(), self.pointing, gamma_bar)
    }

    /// A₀γ̄, the only place γ̄ enters the statistics.
    pub fn scale(&self) -> f64 {
        self.pointing.a0 * self.gamma_bar
    }

    /// Ī = ξ²A₀/(1+ξ²) · Σ a_i Γ(1+b_i) c_i^{−(1+b_i)}.
    pub fn mean_irradiance(&self) -> f64 {
        self.pointing.mean_loss() * self.mg.mean()
    }

    /// E[γ] = γ̄ Ī.
    pub fn mean_snr(&self) -> f64 {
        self.gamma_bar * self.mean_irradiance()
    }

    fn integer_xi_sq(&self) -> Option<u32> {
        let x = self.pointing.xi_sq;
        (x == libm::floor(x) && x >= 1.0 && x < u32::MAX as f64).then_some(x as u32)
    }

    pub fn regime(&self) -> Regime {
        let Some(xi) = self.integer_xi_sq() else {
            return Regime::Numeric;
        };
        let mut bound = false;
        for t in self.mg.terms() {
            if t.b != libm::floor(t.b) {
                return Regime::Numeric;
            }
            if t.b <= xi as f64 {
                if t.b < 2.0 {
                    // the bound density x^{b−2} is not integrable
                    return Regime::Numeric;
                }
                bound = true;
            }
        }
        if bound {
            Regime::Bound
        } else {
            Regime::Closed
        }
    }

    fn require_closed(&self) -> Result<u32> {
        match self.integer_xi_sq() {
            Some(xi) if self.regime() == Regime::Closed => Ok(xi),
            _ => Err(Error::IntegerCondition {
                what: "b_i - xi_sq must be a positive integer and xi_sq an integer",
            }),
        }
    }

    /// Ξ for mixture term `i` and inner index `k`.
    pub fn xi_coeff(&self, i: usize, k: u32) -> Result<f64> {
        let xi = self.require_closed()?;
        let t = self.mg.terms().get(i).ok_or(Error::InvalidParameter {
            what: "term index",
            value: i as f64,
        })?;
        let d = (t.b as u32) - xi;
        if k >= d {
            return Err(Error::InvalidParameter {
                what: "k",
                value: k as f64,
            });
        }
        Ok(libm::exp(self.ln_xi(t, xi, d, k)))
    }

    fn ln_xi(&self, t: &MgTerm, xi: u32, d: u32, k: u32) -> f64 {
        let xf = xi as f64;
        libm::log(t.a)
            + (xf - t.b + k as f64) * libm::log(t.c)
            + libm::log(xf)
            + ln_factorial(d - 1)
            - ln_factorial(k)
            - (xf + k as f64) * libm::log(self.scale())
    }

    /// Erlang-sum density: exact in the closed regime, the PDF bound for
    /// terms with b_i ≤ ξ².
    pub fn expansion(&self) -> Result<Expansion> {
        let regime = self.regime();
        let xi = match (regime, self.integer_xi_sq()) {
            (Regime::Closed | Regime::Bound, Some(xi)) => xi,
            _ => {
                return Err(Error::IntegerCondition {
                    what: "closed forms need integer xi_sq and integer b_i >= 2",
                })
            }
        };
        let ln_s = libm::log(self.scale());
        let mut terms = Vec::new();
        for t in self.mg.terms() {
            let rate = t.c / self.scale();
            let b = t.b as u32;
            if b > xi {
                let d = b - xi;
                for k in 0..d {
                    terms.push(ErlangTerm {
                        ln_weight: self.ln_xi(t, xi, d, k),
                        shape: xi + k,
                        rate,
                    });
                }
            } else {
                // a c^{−1} ξ² (A₀γ̄)^{1−b} x^{b−2} e^{−cx/(A₀γ̄)}
                let ln_weight = libm::log(t.a) - libm::log(t.c)
                    + libm::log(self.pointing.xi_sq)
                    + (1.0 - t.b) * ln_s;
                terms.push(ErlangTerm {
                    ln_weight,
                    shape: b - 1,
                    rate,
                });
            }
        }
        Ok(Expansion {
            terms,
            bound: regime == Regime::Bound,
        })
    }

    /// Exact SNR density for any real parameters.
    pub fn snr_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain {
                what: "snr_pdf",
                value: x,
            });
        }
        let xi = self.pointing.xi_sq;
        let ln_s = libm::log(self.scale());
        let lx = libm::log(x);
        let mut s = TermSum::new();
        for t in self.mg.terms() {
            let lc = libm::log(t.c);
            let ln = libm::log(t.a) + (xi - t.b) * lc + libm::log(xi) + (xi - 1.0) * lx - xi * ln_s
                + ln_upper_inc_gamma(t.b - xi, t.c * x / self.scale())?;
            s.push(libm::exp(ln));
        }
        Ok(s.total())
    }

    /// Finite-sum density under the integer condition.
    pub fn snr_pdf_reduced(&self, x: f64) -> Result<f64> {
        self.require_closed()?;
        if !(x > 0.0) {
            return Err(Error::Domain {
                what: "snr_pdf_reduced",
                value: x,
            });
        }
        Ok(self.expansion()?.pdf(x))
    }

    /// Σ a_i c_i^{−1} ξ² (A₀γ̄)^{−(b_i−1)} x^{b_i−2} e^{−c_i x/(A₀γ̄)}.
    pub fn snr_pdf_bound(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let ln_s = libm::log(self.scale());
        let lx = libm::log(x);
        let mut s = TermSum::new();
        for t in self.mg.terms() {
            let ln = libm::log(t.a) - libm::log(t.c) + libm::log(self.pointing.xi_sq)
                - (t.b - 1.0) * ln_s
                + (t.b - 2.0) * lx
                - t.c * x / self.scale();
            s.push(libm::exp(ln));
        }
        s.total()
    }

    /// Closed-form CCDF: Σ_i Σ_k Σ_r Ξ (m−1)!/(r! λ^{m−r}) x^r e^{−λx}.
    pub fn snr_ccdf(&self, x: f64) -> Result<f64> {
        self.require_closed()?;
        if x < 0.0 || x.is_nan() {
            return Err(Error::Domain {
                what: "snr_ccdf",
                value: x,
            });
        }
        let exp = self.expansion()?;
        let mut s = TermSum::new();
        let lx = libm::log(x);
        for t in &exp.terms {
            let m = t.shape;
            let ll = libm::log(t.rate);
            for r in 0..m {
                if x == 0.0 && r > 0 {
                    break;
                }
                let xr = if r == 0 { 0.0 } else { r as f64 * lx };
                let ln = t.ln_weight + ln_factorial(m - 1) - ln_factorial(r) - (m - r) as f64 * ll
                    + xr
                    - t.rate * x;
                s.push(libm::exp(ln));
            }
        }
        Ok(libm::fmin(1.0, libm::fmax(0.0, s.total())))
    }

    /// CCDF for any real parameters:
    /// Σ a_i c_i^{−b_i} [Γ(b_i, t) − t^{ξ²} Γ(b_i − ξ², t)], t = c_i x/(A₀γ̄).
    pub fn snr_ccdf_numeric(&self, x: f64) -> Result<f64> {
        if x < 0.0 || x.is_nan() {
            return Err(Error::Domain {
                what: "snr_ccdf_numeric",
                value: x,
            });
        }
        if x == 0.0 {
            return Ok(1.0);
        }
        let xi = self.pointing.xi_sq;
        let mut s = TermSum::new();
        for t in self.mg.terms() {
            let z = t.c * x / self.scale();
            let base = libm::log(t.a) - t.b * libm::log(t.c);
            s.push(libm::exp(base + ln_upper_inc_gamma(t.b, z)?));
            s.push(-libm::exp(
                base + xi * libm::log(z) + ln_upper_inc_gamma(t.b - xi, z)?,
            ));
        }
        Ok(libm::fmin(1.0, libm::fmax(0.0, s.total())))
    }

    /// Hops with every b_i moved to ξ² + ⌊b_i − ξ²⌋ and ξ² + ⌈b_i − ξ²⌉
    /// (weights renormalized). Needs integer ξ² and b_i > ξ² + 1.
    pub fn integer_brackets(&self) -> Result<(HopChannel, HopChannel)> {
        let xi = self.integer_xi_sq().ok_or(Error::IntegerCondition {
            what: "xi_sq must be an integer",
        })? as f64;
        let shift = |round: fn(f64) -> f64| -> Result<HopChannel> {
            let mut terms = Vec::with_capacity(self.mg.len());
            for t in self.mg.terms() {
                let d = round(t.b - xi);
                if d < 1.0 {
                    return Err(Error::IntegerCondition {
                        what: "bracket would leave b_i <= xi_sq",
                    });
                }
                terms.push(MgTerm::new(t.a, xi + d, t.c));
            }
            HopChannel::new(
                MixtureGamma::normalized(terms)?,
                self.pointing,
                self.gamma_bar,
            )
        };
        Ok((shift(libm::floor)?, shift(libm::ceil)?))
    }
}
