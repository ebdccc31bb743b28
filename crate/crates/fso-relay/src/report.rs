//! Grid evaluation and CSV reports.
//!
//! Grid points run concurrently; rows always come back in grid order.

use std::io::Write;

use rayon::prelude::*;

use fso_relay_core::aber::{aber, aber_quadrature, AberMethod};
use fso_relay_core::hop::Regime;
use fso_relay_core::relay::Protocol;

use crate::error::{Error, Result};
use crate::mcsim::{estimate_outage_and_aber, simultaneous_band, Estimate, McConfig};
use crate::scenario::Scenario;

/// Largest |closed − quadrature| accepted by `verify`.
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Family-wise coverage of the Monte Carlo bands in `verify`.
pub const COVERAGE: f64 = 0.95;

/// Full-precision, locale-free float formatting.
pub fn fmt_f(x: f64) -> String {
    format!("{x:e}")
}

fn fmt_db(x: f64) -> String {
    // grid values like 0.1·k print with float noise otherwise
    let r = (x * 1e9).round() / 1e9;
    format!("{r}")
}

fn context(db: f64, p: Protocol) -> String {
    format!("gamma_bar_db={} protocol={}", fmt_db(db), p.name())
}

fn points(scn: &Scenario) -> Vec<(f64, Protocol)> {
    scn.grid_db
        .iter()
        .flat_map(|&db| scn.protocols.iter().map(move |&p| (db, p)))
        .collect()
}

/// Runs `f` over the grid in parallel and returns the first failure in grid
/// order, if any.
fn par_grid<T: Send, F>(pts: &[(f64, Protocol)], f: F) -> Result<Vec<T>>
where
    F: Fn(f64, Protocol) -> Result<T> + Sync,
{
    let out: Vec<Result<T>> = pts.par_iter().map(|&(db, p)| f(db, p)).collect();
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma_bar_db: f64,
    pub protocol: Protocol,
    pub outage: f64,
    pub aber: f64,
    pub method: Regime,
    pub aber_method: AberMethod,
}

impl SweepRow {
    pub fn bound_regime(&self) -> bool {
        self.method == Regime::Bound
    }
}

pub fn sweep(scn: &Scenario) -> Result<Vec<SweepRow>> {
    let th = scn.gamma_th();
    par_grid(&points(scn), |db, p| {
        let link = scn.link_at(db, p)?;
        let ctx = || context(db, p);
        let o = link.outage(th).map_err(|e| Error::numerical(ctx(), e))?;
        let a = aber(&link, scn.modulation).map_err(|e| Error::numerical(ctx(), e))?;
        if o.method == Regime::Bound {
            log::warn!("{}: bound regime, values are upper bounds", ctx());
        }
        Ok(SweepRow {
            gamma_bar_db: db,
            protocol: p,
            outage: o.value,
            aber: a.value,
            method: o.method,
            aber_method: a.method,
        })
    })
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn aber_method_name(m: AberMethod) -> &'static str {
    match m {
        AberMethod::ClosedForm => "closed_form",
        AberMethod::Quadrature => "quadrature",
    }
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut c = csv_writer(w);
    c.write_record([
        "gamma_bar_db",
        "protocol",
        "outage",
        "aber",
        "method",
        "bound_regime",
    ])?;
    for r in rows {
        c.write_record([
            fmt_db(r.gamma_bar_db),
            r.protocol.name().into(),
            fmt_f(r.outage),
            fmt_f(r.aber),
            r.method.label().into(),
            r.bound_regime().to_string(),
        ])?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_outage<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut c = csv_writer(w);
    c.write_record([
        "gamma_bar_db",
        "protocol",
        "outage",
        "method",
        "bound_regime",
    ])?;
    for r in rows {
        c.write_record([
            fmt_db(r.gamma_bar_db),
            r.protocol.name().into(),
            fmt_f(r.outage),
            r.method.label().into(),
            r.bound_regime().to_string(),
        ])?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_aber<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut c = csv_writer(w);
    c.write_record([
        "gamma_bar_db",
        "protocol",
        "aber",
        "method",
        "aber_method",
        "bound_regime",
    ])?;
    for r in rows {
        c.write_record([
            fmt_db(r.gamma_bar_db),
            r.protocol.name().into(),
            fmt_f(r.aber),
            r.method.label().into(),
            aber_method_name(r.aber_method).into(),
            r.bound_regime().to_string(),
        ])?;
    }
    c.flush()?;
    Ok(())
}

/// Single-hop density and CCDF at each grid point.
pub fn write_pdf<W: Write>(scn: &Scenario, xs: &[f64], w: W) -> Result<()> {
    let mut c = csv_writer(w);
    c.write_record(["gamma_bar_db", "hop", "x", "pdf", "ccdf", "method"])?;
    for &db in &scn.grid_db {
        let (h1, h2) = scn.hops_at(db)?;
        for (i, h) in [(1, h1), (2, h2)] {
            let regime = h.regime();
            for &x in xs {
                let ctx = || format!("gamma_bar_db={} hop={i} x={x}", fmt_db(db));
                let pdf = h.snr_pdf(x).map_err(|e| Error::numerical(ctx(), e))?;
                let ccdf = match regime {
                    Regime::Closed => h.snr_ccdf(x),
                    _ => h.snr_ccdf_numeric(x),
                }
                .map_err(|e| Error::numerical(ctx(), e))?;
                let method = if regime == Regime::Closed {
                    "closed"
                } else {
                    "numeric"
                };
                c.write_record([
                    fmt_db(db),
                    i.to_string(),
                    fmt_f(x),
                    fmt_f(pdf),
                    fmt_f(ccdf),
                    method.into(),
                ])?;
            }
        }
    }
    c.flush()?;
    Ok(())
}

/// End-to-end CDF at each grid point and protocol.
pub fn write_cdf<W: Write>(scn: &Scenario, xs: &[f64], w: W) -> Result<()> {
    let rows = par_grid(&points(scn), |db, p| {
        let link = scn.link_at(db, p)?;
        xs.iter()
            .map(|&x| {
                link.cdf(x)
                    .map(|v| (db, p, x, v))
                    .map_err(|e| Error::numerical(format!("{} x={x}", context(db, p)), e))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut c = csv_writer(w);
    c.write_record([
        "gamma_bar_db",
        "protocol",
        "x",
        "cdf",
        "method",
        "bound_regime",
    ])?;
    for (db, p, x, v) in rows.into_iter().flatten() {
        c.write_record([
            fmt_db(db),
            p.name().into(),
            fmt_f(x),
            fmt_f(v.value),
            v.method.label().into(),
            (v.method == Regime::Bound).to_string(),
        ])?;
    }
    c.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Outage,
    Aber,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Aber => "aber",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub gamma_bar_db: f64,
    pub protocol: Protocol,
    pub metric: Metric,
    /// Closed form, or the bound in the bound regime.
    pub closed: f64,
    /// Integral-form CDF for outage; quadrature of the ABER definition.
    pub quadrature: f64,
    pub mc: Estimate,
    /// Simultaneous 95% band over all rows of the report.
    pub band: (f64, f64),
    pub method: Regime,
    pub pass: bool,
}

impl VerifyRow {
    pub fn bound_regime(&self) -> bool {
        self.method == Regime::Bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }
}

pub fn verify(scn: &Scenario, mc: &McConfig) -> Result<VerifyReport> {
    let pts = points(scn);
    let family = 2 * pts.len();
    let th = scn.gamma_th();
    let m = scn.modulation;
    let raw = par_grid(&pts, |db, p| {
        let link = scn.link_at(db, p)?;
        let num = |e| Error::numerical(context(db, p), e);
        let o = link.outage(th).map_err(num)?;
        let o_quad = link.cdf_numeric(th).map_err(num)?;
        let a = aber(&link, m).map_err(num)?;
        let a_quad = if a.method == AberMethod::Quadrature {
            a.value
        } else {
            aber_quadrature(&link, m).map_err(num)?
        };
        let (mo, ma) = estimate_outage_and_aber(&link, th, m, mc)?;
        Ok([
            (db, p, Metric::Outage, o.value, o_quad, mo, o.method),
            (db, p, Metric::Aber, a.value, a_quad, ma, o.method),
        ])
    })?;
    let rows = raw
        .into_iter()
        .flatten()
        .map(|(db, p, metric, closed, quadrature, est, method)| {
            let indicator = metric == Metric::Outage;
            let band = simultaneous_band(&est, COVERAGE, family, indicator);
            let pass = if method == Regime::Bound {
                est.value <= closed
            } else {
                band.0 <= closed && closed <= band.1 && (closed - quadrature).abs() <= AGREEMENT_TOL
            };
            if !pass {
                log::warn!("{} {}: verification failed", context(db, p), metric.name());
            }
            VerifyRow {
                gamma_bar_db: db,
                protocol: p,
                metric,
                closed,
                quadrature,
                mc: est,
                band,
                method,
                pass,
            }
        })
        .collect();
    Ok(VerifyReport { rows })
}

pub fn write_verify<W: Write>(r: &VerifyReport, w: W) -> Result<()> {
    let mut c = csv_writer(w);
    c.write_record([
        "gamma_bar_db",
        "protocol",
        "metric",
        "closed",
        "quadrature",
        "mc",
        "mc_std_err",
        "band_low",
        "band_high",
        "method",
        "bound_regime",
        "pass",
    ])?;
    for row in &r.rows {
        c.write_record([
            fmt_db(row.gamma_bar_db),
            row.protocol.name().into(),
            row.metric.name().into(),
            fmt_f(row.closed),
            fmt_f(row.quadrature),
            fmt_f(row.mc.value),
            fmt_f(row.mc.std_err),
            fmt_f(row.band.0),
            fmt_f(row.band.1),
            row.method.label().into(),
            row.bound_regime().to_string(),
            row.pass.to_string(),
        ])?;
    }
    c.flush()?;
    Ok(())
}
