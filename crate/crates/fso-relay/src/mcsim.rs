//! Parallel, reproducible Monte Carlo estimates of outage and ABER.
//!
//! Samples are drawn in fixed blocks of [`BLOCK`]. Block `k` uses a ChaCha8
//! generator seeded with the run seed on stream `k`, and block moments are
//! merged in block order. The result depends on (seed, samples) only, never
//! on how blocks are spread over worker streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fso_relay_core::aber::Modulation;
use fso_relay_core::mgfit::GammaGammaParams;
use fso_relay_core::sampling::{FadingSource, LinkSampler};
use fso_relay_core::RelayLink;

use crate::error::{Error, Result};

pub const BLOCK: u64 = 1 << 16;
pub const MIN_SAMPLES: u64 = 10_000;
const Z95: f64 = 1.959_963_984_540_054;

/// Where the simulated turbulence comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Fading {
    /// Exact Gamma-Gamma per hop.
    GammaGamma([GammaGammaParams; 2]),
    /// The hops' own mixtures.
    Mixture,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub streams: usize,
    pub fading: Fading,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::config(format!(
                "mc samples must be at least {MIN_SAMPLES}, got {samples}"
            )));
        }
        Ok(Self {
            samples,
            seed,
            streams: 1,
            fading: Fading::Mixture,
        })
    }

    pub fn with_streams(mut self, streams: usize) -> Result<Self> {
        if streams == 0 {
            return Err(Error::config("mc streams must be positive"));
        }
        self.streams = streams;
        Ok(self)
    }

    pub fn with_fading(mut self, fading: Fading) -> Self {
        self.fading = fading;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
    pub ci95: (f64, f64),
    pub samples: u64,
    /// No spread was observed; for an indicator the interval falls back to
    /// the rule of three.
    pub degenerate: bool,
}

impl Estimate {
    pub fn contains(&self, x: f64) -> bool {
        self.ci95.0 <= x && x <= self.ci95.1
    }
}

/// Running (Σx, Σx², n).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub sum: f64,
    pub sum_sq: f64,
    pub n: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
        self.n += 1;
    }

    fn merge(&mut self, o: &Moments) {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.n += o.n;
    }

    /// Mean with the standard error of the mean.
    pub fn estimate(&self, indicator: bool) -> Estimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        let std_err = (var / n).sqrt();
        let degenerate = std_err == 0.0;
        let ci95 = if degenerate && indicator {
            let r3 = 3.0 / n;
            if mean < 0.5 {
                (0.0, r3)
            } else {
                (1.0 - r3, 1.0)
            }
        } else {
            (mean - Z95 * std_err, mean + Z95 * std_err)
        };
        Estimate {
            value: mean,
            std_err,
            ci95,
            samples: self.n,
            degenerate,
        }
    }
}

fn sampler(link: &RelayLink, cfg: &McConfig) -> Result<LinkSampler> {
    let sources = match &cfg.fading {
        Fading::GammaGamma([a, b]) => [FadingSource::GammaGamma(*a), FadingSource::GammaGamma(*b)],
        Fading::Mixture => [
            FadingSource::Mixture(link.hop1().mg().clone()),
            FadingSource::Mixture(link.hop2().mg().clone()),
        ],
    };
    LinkSampler::new(link, [&sources[0], &sources[1]])
        .map_err(|e| Error::numerical("monte carlo sampler", e))
}

/// Runs `f` on every end-to-end SNR sample and returns the moments of each
/// of its `K` outputs.
pub fn simulate<const K: usize, F>(link: &RelayLink, cfg: &McConfig, f: F) -> Result<[Moments; K]>
where
    F: Fn(f64) -> [f64; K] + Sync,
{
    let s = sampler(link, cfg)?;
    let blocks = cfg.samples.div_ceil(BLOCK);
    let streams = (cfg.streams as u64).clamp(1, blocks);
    let per_stream = blocks.div_ceil(streams);
    let chunks: Vec<Vec<[Moments; K]>> = (0..streams)
        .into_par_iter()
        .map(|st| {
            let lo = st * per_stream;
            let hi = ((st + 1) * per_stream).min(blocks);
            (lo..hi).map(|b| run_block(&s, cfg, b, &f)).collect()
        })
        .collect();
    let mut total = [Moments::default(); K];
    for block in chunks.iter().flatten() {
        for (t, m) in total.iter_mut().zip(block) {
            t.merge(m);
        }
    }
    Ok(total)
}

fn run_block<const K: usize, F>(s: &LinkSampler, cfg: &McConfig, block: u64, f: &F) -> [Moments; K]
where
    F: Fn(f64) -> [f64; K],
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(block);
    let n = BLOCK.min(cfg.samples - block * BLOCK);
    let mut m = [Moments::default(); K];
    for _ in 0..n {
        let out = f(s.sample(&mut rng));
        for (mi, x) in m.iter_mut().zip(out) {
            mi.push(x);
        }
    }
    m
}

/// P(γ < γ_th).
pub fn estimate_outage(link: &RelayLink, gamma_th: f64, cfg: &McConfig) -> Result<Estimate> {
    let [m] = simulate(link, cfg, |g| [if g < gamma_th { 1.0 } else { 0.0 }])?;
    Ok(m.estimate(true))
}

/// Mean of the conditional error probability.
pub fn estimate_aber(link: &RelayLink, m: Modulation, cfg: &McConfig) -> Result<Estimate> {
    let [a] = simulate(link, cfg, |g| [m.conditional_ber(g)])?;
    Ok(a.estimate(false))
}

/// Outage and ABER from one set of samples.
pub fn estimate_outage_and_aber(
    link: &RelayLink,
    gamma_th: f64,
    m: Modulation,
    cfg: &McConfig,
) -> Result<(Estimate, Estimate)> {
    let [o, a] = simulate(link, cfg, |g| {
        [if g < gamma_th { 1.0 } else { 0.0 }, m.conditional_ber(g)]
    })?;
    Ok((o.estimate(true), a.estimate(false)))
}

/// z with P(|Z| ≤ z) = `coverage` for a standard normal Z.
pub fn two_sided_z(coverage: f64) -> f64 {
    let tail = 1.0 - coverage;
    // P(|Z| > z) = erfc(z/√2), decreasing in z
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fso_relay_core::specfun::erfc(mid / std::f64::consts::SQRT_2) > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Interval that holds simultaneously with probability `coverage` over
/// `family` estimates (Bonferroni).
pub fn simultaneous_band(
    e: &Estimate,
    coverage: f64,
    family: usize,
    indicator: bool,
) -> (f64, f64) {
    let alpha = (1.0 - coverage) / family.max(1) as f64;
    if e.degenerate && indicator {
        let r = -alpha.ln() / e.samples as f64;
        return if e.value < 0.5 {
            (0.0, r)
        } else {
            (1.0 - r, 1.0)
        };
    }
    let z = two_sided_z(1.0 - alpha);
    (e.value - z * e.std_err, e.value + z * e.std_err)
}
