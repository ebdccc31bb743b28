//! Command-line interface.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fso_relay_core::mgfit::{fit_gamma_gamma, max_relative_pdf_error, GammaGammaParams};

use crate::error::{Error, Result};
use crate::mcsim::McConfig;
use crate::report;
use crate::scenario::{parse_protocols, Scenario};

/// Fit-error grid of the `fit` report.
pub const FIT_GRID: (f64, f64, usize) = (0.05, 5.0, 400);

#[derive(Debug, Parser)]
#[command(
    name = "fso-relay",
    version,
    about = "Outage and ABER of dual-hop relayed FSO links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss-Laguerre mixture-Gamma fit of a Gamma-Gamma density, as JSON.
    Fit(FitArgs),
    /// Single-hop SNR density and CCDF over the sweep grid.
    Pdf(PointArgs),
    /// End-to-end CDF over the sweep grid.
    Cdf(PointArgs),
    /// Outage probability at gamma_th over the sweep grid.
    Outage(CommonArgs),
    /// Average bit-error rate over the sweep grid.
    Aber(CommonArgs),
    /// Outage and ABER for every grid point and protocol.
    Sweep(CommonArgs),
    /// Closed forms against quadrature and Monte Carlo.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(short = 'L', long = "L", default_value_t = 10)]
    pub l: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario JSON file.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csi0, csi1, fixed, df.
    #[arg(long, value_delimiter = ',')]
    pub protocol: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated SNR values (linear).
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker partitions; results do not depend on it.
    #[arg(long)]
    pub streams: Option<usize>,
}

#[derive(Debug, Serialize)]
struct FitOutput {
    alpha: f64,
    beta: f64,
    #[serde(rename = "L")]
    l: usize,
    terms: Vec<TermOut>,
    report: FitReport,
}

#[derive(Debug, Serialize)]
struct TermOut {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Debug, Serialize)]
struct FitReport {
    max_rel_pdf_error: f64,
    grid: (f64, f64),
    points: usize,
}

fn sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Error::config(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(stdout),
    })
}

fn load(c: &CommonArgs) -> Result<Scenario> {
    let mut scn = Scenario::load(&c.config)?;
    if let Some(list) = &c.protocol {
        scn.protocols = parse_protocols(list)?;
    }
    Ok(scn)
}

fn check_xs(xs: &[f64]) -> Result<()> {
    if xs.is_empty() || xs.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::config("--x needs positive finite values"));
    }
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Fit(a) => {
            let gg =
                GammaGammaParams::new(a.alpha, a.beta).map_err(|e| Error::config(e.to_string()))?;
            if !(1..=64).contains(&a.l) {
                return Err(Error::config(format!("L must be in 1..=64, got {}", a.l)));
            }
            let mg = fit_gamma_gamma(gg, a.l).map_err(|e| Error::numerical("fit", e))?;
            let (lo, hi, n) = FIT_GRID;
            let err = max_relative_pdf_error(&mg, gg, lo, hi, n)
                .map_err(|e| Error::numerical("fit report", e))?;
            let out = FitOutput {
                alpha: a.alpha,
                beta: a.beta,
                l: a.l,
                terms: mg
                    .terms()
                    .iter()
                    .map(|t| TermOut {
                        a: t.a,
                        b: t.b,
                        c: t.c,
                    })
                    .collect(),
                report: FitReport {
                    max_rel_pdf_error: err,
                    grid: (lo, hi),
                    points: n,
                },
            };
            let mut w = sink(&a.out, stdout)?;
            serde_json::to_writer_pretty(&mut w, &out).map_err(|e| Error::Io(e.into()))?;
            writeln!(w)?;
            w.flush()?;
        }
        Command::Pdf(a) => {
            check_xs(&a.x)?;
            let scn = load(&a.common)?;
            report::write_pdf(&scn, &a.x, sink(&a.common.out, stdout)?)?;
        }
        Command::Cdf(a) => {
            check_xs(&a.x)?;
            let scn = load(&a.common)?;
            report::write_cdf(&scn, &a.x, sink(&a.common.out, stdout)?)?;
        }
        Command::Outage(a) => {
            let rows = report::sweep(&load(&a)?)?;
            report::write_outage(&rows, sink(&a.out, stdout)?)?;
        }
        Command::Aber(a) => {
            let rows = report::sweep(&load(&a)?)?;
            report::write_aber(&rows, sink(&a.out, stdout)?)?;
        }
        Command::Sweep(a) => {
            let rows = report::sweep(&load(&a)?)?;
            report::write_sweep(&rows, sink(&a.out, stdout)?)?;
        }
        Command::Verify(a) => {
            let scn = load(&a.common)?;
            let mc = verify_config(&scn, &a)?;
            let r = report::verify(&scn, &mc)?;
            report::write_verify(&r, sink(&a.common.out, stdout)?)?;
            let failed = r.failures();
            writeln!(
                stderr,
                "verify: {} rows, {} failed ({} samples, seed {}, simultaneous {}% bands)",
                r.rows.len(),
                failed,
                mc.samples,
                mc.seed,
                report::COVERAGE * 100.0
            )?;
            if failed > 0 {
                return Err(Error::Verification {
                    failed,
                    total: r.rows.len(),
                });
            }
        }
    }
    Ok(())
}

fn verify_config(scn: &Scenario, a: &VerifyArgs) -> Result<McConfig> {
    let base = match (&scn.mc, a.samples) {
        (Some(m), _) => m.clone(),
        (None, Some(n)) => McConfig::new(n, 0)?,
        (None, None) => {
            return Err(Error::config(
                "verify needs an mc block in the scenario or --samples",
            ))
        }
    };
    let mut cfg = match a.samples {
        Some(n) => McConfig::new(n, base.seed)?
            .with_streams(base.streams)?
            .with_fading(base.fading),
        None => base,
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(s) = a.streams {
        cfg = cfg.with_streams(s)?;
    }
    Ok(cfg)
}
