//! Scenario files: JSON with a top-level `"schema": 1`.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "hop": { "gamma_gamma": { "alpha": 4, "beta": 2, "L": 10 }, "xi_sq": 1 },
//!   "protocols": ["df", "csi0", "csi1", "fixed"],
//!   "gamma_th_db": 0,
//!   "sweep": { "start_db": 0, "stop_db": 30, "step_db": 10 },
//!   "mc": { "samples": 1000000, "seed": 7 }
//! }
//! ```
//!
//! `hop` is shared by both hops; `hops` gives two separate specs instead.

use serde::{Deserialize, Serialize};

use fso_relay_core::aber::Modulation;
use fso_relay_core::hop::Pointing;
use fso_relay_core::mgfit::{fit_gamma_gamma, GammaGammaParams, MgTerm, MixtureGamma};
use fso_relay_core::relay::{CsiMode, Gain, Protocol, RelayLink};
use fso_relay_core::{db_to_linear, HopChannel};

use crate::error::{Error, Result};
use crate::mcsim::{Fading, McConfig};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_L: usize = 10;
pub const DEFAULT_R_OVER_WZ: f64 = 0.1;
const MAX_GRID: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hop: Option<HopSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hops: Option<Vec<HopSpec>>,
    pub protocols: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulation: Option<ModulationSpec>,
    #[serde(default)]
    pub gamma_th_db: f64,
    pub sweep: SweepSpec,
    /// Explicit fixed-gain U; omitted means U = 1/E[1/(1+γ₁)].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_gamma: Option<GammaGammaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mg: Option<Vec<MgTermSpec>>,
    pub xi_sq: f64,
    #[serde(default, rename = "A0", skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_over_wz: Option<f64>,
    #[serde(default)]
    pub gamma_bar_offset_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaGammaSpec {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_l", rename = "L")]
    pub l: usize,
}

fn default_l() -> usize {
    DEFAULT_L
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MgTermSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationSpec {
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_streams")]
    pub streams: usize,
    /// "gamma_gamma" or "mg"; defaults to gamma_gamma when both hops are
    /// given as Gamma-Gamma.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

fn default_streams() -> usize {
    1
}

/// One hop with γ̄ left open.
#[derive(Debug, Clone, PartialEq)]
pub struct HopTemplate {
    pub mg: MixtureGamma,
    pub pointing: Pointing,
    pub offset_db: f64,
    pub gamma_gamma: Option<GammaGammaParams>,
}

impl HopTemplate {
    pub fn at(&self, gamma_bar_db: f64) -> Result<HopChannel> {
        HopChannel::new(
            self.mg.clone(),
            self.pointing,
            db_to_linear(gamma_bar_db + self.offset_db),
        )
        .map_err(|e| Error::numerical(format!("gamma_bar_db={gamma_bar_db}"), e))
    }
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub hops: [HopTemplate; 2],
    pub protocols: Vec<Protocol>,
    pub modulation: Modulation,
    pub gamma_th_db: f64,
    pub grid_db: Vec<f64>,
    pub gain: Gain,
    pub mc: Option<McConfig>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_file(f: &ScenarioFile) -> Result<Self> {
        if f.schema != SCHEMA {
            return Err(Error::config(format!(
                "unsupported schema {} (expected {SCHEMA})",
                f.schema
            )));
        }
        let specs: [&HopSpec; 2] = match (&f.hop, &f.hops) {
            (Some(h), None) => [h, h],
            (None, Some(v)) if v.len() == 2 => [&v[0], &v[1]],
            (None, Some(v)) => {
                return Err(Error::config(format!(
                    "hops needs exactly 2 entries, got {}",
                    v.len()
                )))
            }
            (Some(_), Some(_)) => return Err(Error::config("give either hop or hops, not both")),
            (None, None) => return Err(Error::config("missing hop specification")),
        };
        let hops = [hop_template(specs[0], 1)?, hop_template(specs[1], 2)?];
        let protocols = parse_protocols(&f.protocols)?;
        let modulation = match f.modulation {
            None => Modulation::BPSK,
            Some(m) => {
                Modulation::new(m.p, m.q).map_err(|e| Error::config(format!("modulation: {e}")))?
            }
        };
        if !f.gamma_th_db.is_finite() {
            return Err(Error::config("gamma_th_db must be finite"));
        }
        let grid_db = grid(&f.sweep)?;
        let gain = match f.fixed_gain {
            None => Gain::Auto,
            Some(u) if u > 0.0 && u.is_finite() => Gain::Fixed(u),
            Some(u) => {
                return Err(Error::config(format!(
                    "fixed_gain must be positive, got {u}"
                )))
            }
        };
        let mc = match &f.mc {
            None => None,
            Some(m) => Some(mc_config(m, &hops)?),
        };
        Ok(Self {
            hops,
            protocols,
            modulation,
            gamma_th_db: f.gamma_th_db,
            grid_db,
            gain,
            mc,
        })
    }

    pub fn gamma_th(&self) -> f64 {
        db_to_linear(self.gamma_th_db)
    }

    pub fn hops_at(&self, gamma_bar_db: f64) -> Result<(HopChannel, HopChannel)> {
        Ok((
            self.hops[0].at(gamma_bar_db)?,
            self.hops[1].at(gamma_bar_db)?,
        ))
    }

    pub fn link_at(&self, gamma_bar_db: f64, protocol: Protocol) -> Result<RelayLink> {
        let (h1, h2) = self.hops_at(gamma_bar_db)?;
        let protocol = match protocol {
            Protocol::FixedAf(_) => Protocol::FixedAf(self.gain),
            p => p,
        };
        RelayLink::new(h1, h2, protocol).map_err(|e| {
            Error::numerical(
                format!("gamma_bar_db={gamma_bar_db} protocol={}", protocol.name()),
                e,
            )
        })
    }
}

pub fn parse_protocol(name: &str) -> Result<Protocol> {
    match name.trim() {
        "csi0" => Ok(Protocol::CsiAf(CsiMode::Approximate)),
        "csi1" => Ok(Protocol::CsiAf(CsiMode::Exact)),
        "fixed" => Ok(Protocol::FixedAf(Gain::Auto)),
        "df" => Ok(Protocol::Df),
        other => Err(Error::config(format!(
            "unknown protocol {other:?} (expected csi0, csi1, fixed or df)"
        ))),
    }
}

pub fn parse_protocols<S: AsRef<str>>(names: &[S]) -> Result<Vec<Protocol>> {
    if names.is_empty() {
        return Err(Error::config("at least one protocol is required"));
    }
    let mut out = Vec::with_capacity(names.len());
    for n in names {
        let p = parse_protocol(n.as_ref())?;
        if out.contains(&p) {
            return Err(Error::config(format!("protocol {} listed twice", p.name())));
        }
        out.push(p);
    }
    Ok(out)
}

fn hop_template(s: &HopSpec, index: usize) -> Result<HopTemplate> {
    let bad =
        |what: &str, e: fso_relay_core::Error| Error::config(format!("hop {index} {what}: {e}"));
    let (mg, gamma_gamma) = match (&s.gamma_gamma, &s.mg) {
        (Some(g), None) => {
            let gg = GammaGammaParams::new(g.alpha, g.beta).map_err(|e| bad("gamma_gamma", e))?;
            let mg = fit_gamma_gamma(gg, g.l).map_err(|e| bad("gamma_gamma", e))?;
            (mg, Some(gg))
        }
        (None, Some(terms)) => {
            let t = terms.iter().map(|t| MgTerm::new(t.a, t.b, t.c)).collect();
            (MixtureGamma::new(t).map_err(|e| bad("mg", e))?, None)
        }
        _ => {
            return Err(Error::config(format!(
                "hop {index}: give exactly one of gamma_gamma or mg"
            )))
        }
    };
    let pointing = match (s.a0, s.r_over_wz) {
        (Some(_), Some(_)) => {
            return Err(Error::config(format!(
                "hop {index}: give A0 or r_over_wz, not both"
            )))
        }
        (Some(a0), None) => Pointing::new(s.xi_sq, a0),
        (None, r) => Pointing::from_geometry(s.xi_sq, r.unwrap_or(DEFAULT_R_OVER_WZ), 1.0),
    }
    .map_err(|e| bad("pointing", e))?;
    if !s.gamma_bar_offset_db.is_finite() {
        return Err(Error::config(format!(
            "hop {index}: gamma_bar_offset_db must be finite"
        )));
    }
    Ok(HopTemplate {
        mg,
        pointing,
        offset_db: s.gamma_bar_offset_db,
        gamma_gamma,
    })
}

fn grid(s: &SweepSpec) -> Result<Vec<f64>> {
    let SweepSpec {
        start_db,
        stop_db,
        step_db,
    } = *s;
    if !(start_db.is_finite() && stop_db.is_finite()) || stop_db < start_db {
        return Err(Error::config(format!(
            "sweep range [{start_db}, {stop_db}] is empty"
        )));
    }
    if !(step_db > 0.0 && step_db.is_finite()) {
        return Err(Error::config(format!(
            "sweep step must be positive, got {step_db}"
        )));
    }
    let n = ((stop_db - start_db) / step_db + 1e-9).floor() as usize + 1;
    if n > MAX_GRID {
        return Err(Error::config(format!(
            "sweep has {n} points, limit is {MAX_GRID}"
        )));
    }
    Ok((0..n).map(|i| start_db + i as f64 * step_db).collect())
}

fn mc_config(m: &McSpec, hops: &[HopTemplate; 2]) -> Result<McConfig> {
    let gg = match (hops[0].gamma_gamma, hops[1].gamma_gamma) {
        (Some(a), Some(b)) => Some([a, b]),
        _ => None,
    };
    let fading = match (m.source.as_deref(), gg) {
        (None | Some("gamma_gamma"), Some(p)) => Fading::GammaGamma(p),
        (Some("gamma_gamma"), None) => {
            return Err(Error::config(
                "mc source gamma_gamma needs both hops given as gamma_gamma",
            ))
        }
        (None | Some("mg"), _) => Fading::Mixture,
        (Some(other), _) => {
            return Err(Error::config(format!(
                "unknown mc source {other:?} (expected gamma_gamma or mg)"
            )))
        }
    };
    Ok(McConfig::new(m.samples, m.seed)?
        .with_streams(m.streams)?
        .with_fading(fading))
}
