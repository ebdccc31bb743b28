//! Adaptive Gauss-Kronrod (21-point) quadrature on finite intervals.
//!
//! Semi-infinite integrals are handled by callers through a change of
//! variables (usually y = e^u) followed by truncation where the integrand is
//! negligible.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Maximum number of subintervals kept at once.
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_intervals: 4000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-12, 1e-10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = libm::fabs(err);
    if resasc != 0.0 && err != 0.0 {
        let scale = libm::pow(200.0 * err / resasc, 1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && floor > err {
        err = floor;
    }
    err
}

fn qk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = 0.0;
    let mut resk = fc * WGK[10];
    let mut resabs = libm::fabs(resk);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (libm::fabs(f1) + libm::fabs(f2));
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (libm::fabs(f1) + libm::fabs(f2));
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * libm::fabs(fc - mean);
    for j in 0..10 {
        resasc += WGK[j] * (libm::fabs(fv1[j] - mean) + libm::fabs(fv2[j] - mean));
    }
    let h = libm::fabs(half);
    let err = rescale_error((resk - resg) * half, resabs * h, resasc * h);
    Segment {
        a,
        b,
        value: resk * half,
        error: err,
    }
}

/// ∫_a^b f.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    integrate_partitioned(f, &[a, b], tol)
}

/// Integral over `[points[0], points[last]]`, starting from the partition
/// given by `points` (strictly increasing).
pub fn integrate_partitioned<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Integral> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter {
            what: "quadrature partition",
            value: points.len() as f64,
        });
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::InvalidParameter {
                what: "quadrature limits",
                value: w[1],
            });
        }
    }
    let mut segs: Vec<Segment> = points
        .windows(2)
        .map(|w| qk21(&mut f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * segs.len();
    loop {
        let (value, error) = totals(&segs);
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                value,
                abs_error: error,
            });
        }
        let target = libm::fmax(tol.abs, tol.rel * libm::fabs(value));
        if error <= target {
            return Ok(Integral {
                value,
                abs_error: error,
                evaluations,
            });
        }
        if segs.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                value,
                abs_error: error,
            });
        }
        let (idx, worst) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, s)| (i, *s))
            .unwrap_or((0, segs[0]));
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval can no longer be split
            return Err(Error::Quadrature {
                value,
                abs_error: error,
            });
        }
        let left = qk21(&mut f, worst.a, mid);
        let right = qk21(&mut f, mid, worst.b);
        evaluations += 42;
        let lost = left.error + right.error;
        if lost >= worst.error && worst.error < 1e3 * f64::EPSILON * libm::fabs(worst.value) {
            // roundoff dominates this piece; accept it as converged
            segs[idx] = Segment {
                error: 0.0,
                ..worst
            };
            continue;
        }
        segs[idx] = left;
        segs.push(right);
    }
}

/// ∫₀^∞ f(x) dx for a non-negative `f`, integrated in u = ln x.
///
/// The support is located by sampling u on [−`SCAN`, `SCAN`]; the range kept
/// is where the integrand is above 1e−20 of its sampled peak.
pub fn integrate_positive_axis<F: FnMut(f64) -> f64>(mut f: F, tol: Tolerance) -> Result<Integral> {
    const SCAN: f64 = 100.0;
    const STEP: f64 = 0.5;
    let mut g = |u: f64| {
        let x = libm::exp(u);
        let v = f(x) * x;
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    };
    let n = (2.0 * SCAN / STEP) as usize;
    let mut samples = Vec::with_capacity(n + 1);
    let mut peak: f64 = 0.0;
    for i in 0..=n {
        let u = -SCAN + STEP * i as f64;
        let v = g(u);
        if v.is_nan() {
            return Err(Error::Quadrature {
                value: f64::NAN,
                abs_error: f64::NAN,
            });
        }
        peak = libm::fmax(peak, libm::fabs(v));
        samples.push(v);
    }
    if peak == 0.0 {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: n + 1,
        });
    }
    let keep = |v: &f64| libm::fabs(*v) > 1e-20 * peak;
    let first = samples.iter().position(keep).unwrap_or(0);
    let last = samples.iter().rposition(keep).unwrap_or(n);
    let lo = -SCAN + STEP * first.saturating_sub(2) as f64;
    let hi = -SCAN + STEP * (last + 2).min(n) as f64;
    let panels = libm::ceil(hi - lo).max(1.0) as usize;
    let points: Vec<f64> = (0..=panels)
        .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
        .collect();
    let mut r = integrate_partitioned(g, &points, tol)?;
    r.evaluations += n + 1;
    Ok(r)
}

fn totals(segs: &[Segment]) -> (f64, f64) {
    let vals: Vec<f64> = segs.iter().map(|s| s.value).collect();
    let value = crate::sum::neumaier(&vals);
    let error = segs.iter().map(|s| s.error).sum();
    (value, error)
}
