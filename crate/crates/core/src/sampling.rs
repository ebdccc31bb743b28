//! Random variates for the Monte Carlo oracle.
//!
//! Generic over any [`rand::Rng`]; seeding and parallelism are the caller's
//! business.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::hop::{HopChannel, Pointing};
use crate::mgfit::{GammaGammaParams, MixtureGamma};
use crate::relay::RelayLink;
use crate::{Error, Result};

/// Uniform draw on (0, 1].
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// I_p = A₀ u^{1/ξ²}, the inverse-CDF draw of the pointing loss.
pub fn sample_pointing<R: Rng + ?Sized>(p: &Pointing, rng: &mut R) -> f64 {
    p.a0() * libm::pow(open_unit(rng), 1.0 / p.xi_sq())
}

fn unit_mean_gamma(shape: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, 1.0 / shape).map_err(|_| Error::InvalidParameter {
        what: "gamma shape",
        value: shape,
    })
}

/// Where the turbulence irradiance I_a comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum FadingSource {
    /// Product of unit-mean Gamma(α) and Gamma(β) variates.
    GammaGamma(GammaGammaParams),
    /// Draw from the mixture itself.
    Mixture(MixtureGamma),
}

/// Precomputed sampler for one fading source.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    GammaGamma(Gamma<f64>, Gamma<f64>),
    Mixture {
        cumulative: Vec<f64>,
        parts: Vec<Gamma<f64>>,
    },
}

impl FadingSampler {
    pub fn new(source: &FadingSource) -> Result<Self> {
        let kind = match source {
            FadingSource::GammaGamma(gg) => {
                SamplerKind::GammaGamma(unit_mean_gamma(gg.alpha())?, unit_mean_gamma(gg.beta())?)
            }
            FadingSource::Mixture(mg) => {
                let probs = mg.component_probabilities();
                let total: f64 = probs.iter().sum();
                let mut acc = 0.0;
                let cumulative = probs
                    .iter()
                    .map(|p| {
                        acc += p / total;
                        acc
                    })
                    .collect();
                let parts = mg
                    .terms()
                    .iter()
                    .map(|t| {
                        Gamma::new(t.b, 1.0 / t.c).map_err(|_| Error::InvalidParameter {
                            what: "mixture term",
                            value: t.b,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                SamplerKind::Mixture { cumulative, parts }
            }
        };
        Ok(Self { kind })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            SamplerKind::GammaGamma(a, b) => a.sample(rng) * b.sample(rng),
            SamplerKind::Mixture { cumulative, parts } => {
                let u = rng.random::<f64>();
                let i = cumulative.partition_point(|&c| c <= u).min(parts.len() - 1);
                parts[i].sample(rng)
            }
        }
    }
}

/// Gamma-Gamma irradiance, one draw.
pub fn sample_gamma_gamma<R: Rng + ?Sized>(gg: GammaGammaParams, rng: &mut R) -> Result<f64> {
    Ok(unit_mean_gamma(gg.alpha())?.sample(rng) * unit_mean_gamma(gg.beta())?.sample(rng))
}

/// Mixture-Gamma irradiance, one draw.
pub fn sample_mixture<R: Rng + ?Sized>(mg: &MixtureGamma, rng: &mut R) -> Result<f64> {
    Ok(FadingSampler::new(&FadingSource::Mixture(mg.clone()))?.sample(rng))
}

/// SNR sampler of one hop, γ = γ̄·I_a·I_p.
#[derive(Debug, Clone)]
pub struct HopSampler {
    fading: FadingSampler,
    pointing: Pointing,
    gamma_bar: f64,
}

impl HopSampler {
    pub fn new(hop: &HopChannel, source: &FadingSource) -> Result<Self> {
        Ok(Self {
            fading: FadingSampler::new(source)?,
            pointing: hop.pointing(),
            gamma_bar: hop.gamma_bar(),
        })
    }

    /// Samples the hop's own mixture.
    pub fn from_hop(hop: &HopChannel) -> Result<Self> {
        Self::new(hop, &FadingSource::Mixture(hop.mg().clone()))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.gamma_bar * self.fading.sample(rng) * sample_pointing(&self.pointing, rng)
    }
}

/// One SNR draw for a hop using its own mixture.
pub fn sample_snr<R: Rng + ?Sized>(hop: &HopChannel, rng: &mut R) -> Result<f64> {
    Ok(HopSampler::from_hop(hop)?.sample(rng))
}

/// End-to-end SNR sampler for a relay link.
#[derive(Debug, Clone)]
pub struct LinkSampler {
    link: RelayLink,
    hops: [HopSampler; 2],
}

impl LinkSampler {
    pub fn new(link: &RelayLink, sources: [&FadingSource; 2]) -> Result<Self> {
        Ok(Self {
            hops: [
                HopSampler::new(link.hop1(), sources[0])?,
                HopSampler::new(link.hop2(), sources[1])?,
            ],
            link: link.clone(),
        })
    }

    pub fn link(&self) -> &RelayLink {
        &self.link
    }

    /// (γ₁, γ₂).
    pub fn sample_hops<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let g1 = self.hops[0].sample(rng);
        (g1, self.hops[1].sample(rng))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (g1, g2) = self.sample_hops(rng);
        self.link.end_to_end(g1, g2)
    }
}
