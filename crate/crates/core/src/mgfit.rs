//! Mixture-Gamma (MG) irradiance models and the Gauss-Laguerre fit of the
//! Gamma-Gamma distribution.

use alloc::vec::Vec;

use crate::specfun::{gauss_laguerre, ln_bessel_k, ln_gamma};
use crate::{Error, Result};

/// Largest number of mixture terms.
pub const MAX_TERMS: usize = 64;
const NORMALIZATION_TOL: f64 = 1e-9;

/// One term a·x^{b−1}·e^{−c·x} of the mixture density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgTerm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MgTerm {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// ln(a Γ(b) c^{−b}), the log of the term's probability mass.
    fn ln_mass(&self) -> f64 {
        libm::log(self.a) + ln_gamma(self.b) - self.b * libm::log(self.c)
    }
}

/// f(x) = Σ a_i x^{b_i−1} e^{−c_i x}, normalized to unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureGamma {
    terms: Vec<MgTerm>,
}

impl MixtureGamma {
    /// Validates positivity, length and unit normalization.
    pub fn new(terms: Vec<MgTerm>) -> Result<Self> {
        check_terms(&terms)?;
        let mass = total_mass(&terms);
        if libm::fabs(mass - 1.0) > NORMALIZATION_TOL {
            return Err(Error::InvalidParameter {
                what: "mixture normalization",
                value: mass,
            });
        }
        Ok(Self { terms })
    }

    /// Like [`MixtureGamma::new`] but rescales the weights to unit mass.
    pub fn normalized(mut terms: Vec<MgTerm>) -> Result<Self> {
        check_terms(&terms)?;
        let mass = total_mass(&terms);
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::DegenerateFit);
        }
        for t in &mut terms {
            t.a /= mass;
        }
        Ok(Self { terms })
    }

    /// Exponential density e^{−x}.
    pub fn exponential() -> Self {
        Self {
            terms: alloc::vec![MgTerm::new(1.0, 1.0, 1.0)],
        }
    }

    pub fn terms(&self) -> &[MgTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let lx = libm::log(x);
        self.terms
            .iter()
            .map(|t| libm::exp(libm::log(t.a) + (t.b - 1.0) * lx - t.c * x))
            .sum()
    }

    /// E[I] = Σ a_i Γ(1+b_i) c_i^{−(1+b_i)}.
    pub fn mean(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| libm::exp(libm::log(t.a) + ln_gamma(1.0 + t.b) - (1.0 + t.b) * libm::log(t.c)))
            .sum()
    }

    /// a_i Γ(b_i) c_i^{−b_i} for every term.
    pub fn component_probabilities(&self) -> Vec<f64> {
        self.terms.iter().map(|t| libm::exp(t.ln_mass())).collect()
    }

    /// P(I ≤ x), from the regularized incomplete gamma of each term.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        let mut upper = 0.0;
        for (t, p) in self.terms.iter().zip(self.component_probabilities()) {
            upper += p * crate::specfun::regularized_upper_inc_gamma(t.b, t.c * x)?;
        }
        Ok(libm::fmin(1.0, libm::fmax(0.0, 1.0 - upper)))
    }
}

fn check_terms(terms: &[MgTerm]) -> Result<()> {
    if terms.is_empty() || terms.len() > MAX_TERMS {
        return Err(Error::InvalidParameter {
            what: "mixture length",
            value: terms.len() as f64,
        });
    }
    for t in terms {
        for (what, v) in [
            ("mixture weight a", t.a),
            ("mixture shape b", t.b),
            ("mixture rate c", t.c),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { what, value: v });
            }
        }
    }
    Ok(())
}

fn total_mass(terms: &[MgTerm]) -> f64 {
    terms.iter().map(|t| libm::exp(t.ln_mass())).sum()
}

/// Gamma-Gamma turbulence parameters, unit mean irradiance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaGammaParams {
    alpha: f64,
    beta: f64,
}

impl GammaGammaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "alpha",
                value: alpha,
            });
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "beta",
                value: beta,
            });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Exact density 2(αβ)^{(α+β)/2}/(Γ(α)Γ(β)) I^{(α+β)/2−1} K_{α−β}(2√(αβI)).
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        let (a, b) = (self.alpha, self.beta);
        let h = 0.5 * (a + b);
        let ln = core::f64::consts::LN_2 + h * libm::log(a * b) - ln_gamma(a) - ln_gamma(b)
            + (h - 1.0) * libm::log(x)
            + ln_bessel_k(a - b, 2.0 * libm::sqrt(a * b * x))?;
        Ok(libm::exp(ln))
    }

    /// Scintillation variance (1 + 1/α)(1 + 1/β) − 1.
    pub fn variance(&self) -> f64 {
        (1.0 + 1.0 / self.alpha) * (1.0 + 1.0 / self.beta) - 1.0
    }
}

/// Gauss-Laguerre MG fit of a Gamma-Gamma density with `l` terms.
///
/// With m = min(α, β), M = max(α, β) and Laguerre pairs (t_i, w_i):
/// b_i = m, c_i = Mm/t_i and θ_i = w_i (Mm)^m t_i^{M−m−1}/(Γ(M)Γ(m)),
/// renormalized to unit mass.
pub fn fit_gamma_gamma(gg: GammaGammaParams, l: usize) -> Result<MixtureGamma> {
    let rule = gauss_laguerre(l)?;
    let m = libm::fmin(gg.alpha, gg.beta);
    let big = libm::fmax(gg.alpha, gg.beta);
    let ln_mm = libm::log(big * m);
    let ln_norm = ln_gamma(big) + ln_gamma(m);
    let mut terms = Vec::with_capacity(l);
    for &(t, w) in &rule {
        if w <= 0.0 {
            // high-order weights can underflow to zero; such nodes carry no mass
            continue;
        }
        let ln_theta = libm::log(w) + m * ln_mm + (big - m - 1.0) * libm::log(t) - ln_norm;
        let theta = libm::exp(ln_theta);
        if !theta.is_finite() {
            return Err(Error::DegenerateFit);
        }
        if theta == 0.0 {
            continue;
        }
        terms.push(MgTerm::new(theta, m, big * m / t));
    }
    if terms.is_empty() {
        return Err(Error::DegenerateFit);
    }
    MixtureGamma::normalized(terms)
}

/// max |f_MG − f_GG| / f_GG over `n` log-spaced points of [lo, hi].
pub fn max_relative_pdf_error(
    mg: &MixtureGamma,
    gg: GammaGammaParams,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::InvalidParameter {
            what: "error grid",
            value: lo,
        });
    }
    let step = libm::log(hi / lo) / (n - 1) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = lo * libm::exp(step * i as f64);
        let exact = gg.pdf(x)?;
        worst = libm::fmax(worst, libm::fabs(mg.pdf(x) - exact) / exact);
    }
    Ok(worst)
}
