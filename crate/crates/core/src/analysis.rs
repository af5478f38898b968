//! Hard-decision achievable rates, shaping optimization, spectral efficiency
//! and crossing points.
//!
//! The hard-decision rate of a `2^m`-ASK input with bit-level crossover
//! probabilities `ε_l` is taken as
//!
//! ```text
//! R_HDD = max(0, H(X) - Σ_l H_b(ε_l))
//! ```
//!
//! per real dimension, with `ε_l` the probability that the demapper's hard
//! bit `l` differs from the transmitted one. Quantities named `*_qam` are for
//! two independent ASK streams and are twice the per-dimension value.

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{AnalysisError, ShapingError};
use crate::pipeline::demap::{Demapper, DemapperMode};
use crate::pipeline::params::PasParams;
use crate::shaping::ccdm::{ccdm_rate, AmplitudeComposition};
use crate::shaping::mb::MbDistribution;

/// Default SNR range searched for crossings, dB.
pub const CROSSING_SCAN_DB: (f64, f64) = (12.0, 30.0);
/// Grid step of the crossing scan, dB.
pub const CROSSING_STEP_DB: f64 = 0.5;
/// Smallest `P_A(1)` the shaping search has to reach at its upper end.
const LAMBDA_MAX_INNER_MASS: f64 = 1.0 - 1e-6;
const LAMBDA_TOLERANCE: f64 = 1e-6;
const LAMBDA_GRID: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Signaling {
    Shaped,
    Uniform,
}

/// A maximal run of observations sharing one hard decision: from `start`
/// up to the next region's start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRegion {
    pub start: f64,
    /// Bit `l` is the hard decision for level `l`.
    pub label: u32,
}

/// Hard-decision regions of `demapper` over the real line, ascending; the
/// first starts at `-inf`.
///
/// The demapper is sampled on a grid fine relative to the point spacing
/// over a range covering every pairwise likelihood crossing plus 8 noise
/// standard deviations, and each change of decision is located by
/// bisection.
pub fn decision_regions(demapper: &Demapper) -> Vec<DecisionRegion> {
    let pts = demapper.points();
    let lp = demapper.log_prior();
    let live: Vec<usize> = (0..pts.len()).filter(|&j| lp[j].is_finite()).collect();
    let (mut lo, mut hi) = (pts[live[0]], pts[*live.last().unwrap()]);
    for (a, &i) in live.iter().enumerate() {
        for &j in &live[a + 1..] {
            if pts[j] > pts[i] {
                let y = 0.5 * (pts[i] + pts[j]) + (lp[i] - lp[j]) / (pts[j] - pts[i]);
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
    }
    lo -= 8.0;
    hi += 8.0;
    let spacing = if pts.len() > 1 { pts[1] - pts[0] } else { 1.0 };
    let width = hi - lo;
    let step = (spacing / 8.0).clamp(width / 20_000.0, width / 64.0);
    let steps = (width / step).ceil() as usize;

    let mut regions = vec![DecisionRegion {
        start: f64::NEG_INFINITY,
        label: demapper.hard_label(lo),
    }];
    let mut a = lo;
    for i in 1..=steps {
        let b = lo + width * i as f64 / steps as f64;
        let lb = demapper.hard_label(b);
        // several changes may share one grid step; peel them off in order
        while regions.last().unwrap().label != lb {
            let cur = regions.last().unwrap().label;
            let (mut x0, mut x1) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                if mid <= x0 || mid >= x1 {
                    break;
                }
                if demapper.hard_label(mid) == cur {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            regions.push(DecisionRegion {
                start: x1,
                label: demapper.hard_label(x1),
            });
            a = x1;
        }
        a = b;
    }
    regions
}

/// `P[a < Z + mu < b]` for standard normal `Z`, accurate in both tails.
fn gauss_mass(a: f64, b: f64, mu: f64) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = (a - mu, b - mu);
    let p = if a >= 0.0 {
        0.5 * (erfc(a * s) - erfc(b * s))
    } else if b <= 0.0 {
        0.5 * (erfc(-b * s) - erfc(-a * s))
    } else {
        1.0 - 0.5 * erfc(-a * s) - 0.5 * erfc(b * s)
    };
    p.max(0.0)
}

/// Bit-level crossover probabilities of `dist` at its current scale.
pub fn error_probs_scaled(dist: &MbDistribution, mode: DemapperMode) -> Vec<f64> {
    let dm = Demapper::new(dist).with_mode(mode);
    let regions = decision_regions(&dm);
    let m = dm.m();
    let mut eps = vec![0.0; m];
    for (j, (&mu, &p)) in dm.points().iter().zip(dist.pmf()).enumerate() {
        if p == 0.0 {
            continue;
        }
        for (r, reg) in regions.iter().enumerate() {
            let end = regions.get(r + 1).map_or(f64::INFINITY, |n| n.start);
            let wrong = (0..m).filter(|&l| ((reg.label >> l) & 1) as u8 != dm.label_bit(j, l));
            let mut mass = None;
            for l in wrong {
                let w = *mass.get_or_insert_with(|| gauss_mass(reg.start, end, mu));
                eps[l] += p * w;
            }
        }
    }
    eps
}

/// `ε_1, …, ε_m` at `snr_db` for the bit-wise demapper.
pub fn bitlevel_error_probs(snr_db: f64, dist: &MbDistribution) -> Vec<f64> {
    error_probs_scaled(&dist.with_snr_db(snr_db), DemapperMode::BitWise)
}

pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `R_HDD` of `dist` at its current scale, bits per real dimension.
pub fn hdd_rate_scaled(dist: &MbDistribution, mode: DemapperMode) -> f64 {
    let loss: f64 = error_probs_scaled(dist, mode)
        .into_iter()
        .map(binary_entropy)
        .sum();
    (dist.entropy() - loss).max(0.0)
}

/// `R_HDD` in bits per real dimension; uniform signaling ignores `lambda`.
pub fn rhdd(snr_db: f64, lambda: f64, m: u32, signaling: Signaling) -> Result<f64, ShapingError> {
    let lambda = match signaling {
        Signaling::Shaped => lambda,
        Signaling::Uniform => 0.0,
    };
    let dist = MbDistribution::new(lambda, m)?.with_snr_db(snr_db);
    Ok(hdd_rate_scaled(&dist, DemapperMode::BitWise))
}

/// Upper end of the shaping search: the `λ` at which the two inner points
/// carry probability `1 - 1e-6`.
pub fn lambda_max(m: u32) -> Result<f64, ShapingError> {
    let inner = |l: f64| MbDistribution::new(l, m).map(|d| d.amplitude_pmf()[0]);
    if m < 2 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while inner(hi)? <= LAMBDA_MAX_INNER_MASS {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if inner(mid)? > LAMBDA_MAX_INNER_MASS {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaOptimum {
    pub lambda: f64,
    /// Bits per real dimension.
    pub r_hdd: f64,
}

/// Maximizes `R_HDD` over `λ ∈ [0, λ_max]` at `snr_db`, the scale being
/// renormalized to the SNR for every `λ`.
///
/// A grid quadratic in `λ` (dense near 0, where optima sit at high SNR)
/// brackets the best point, then golden-section search refines it to
/// `|Δλ| < 1e-6`.
pub fn optimize_lambda(snr_db: f64, m: u32) -> Result<LambdaOptimum, ShapingError> {
    let f = |l: f64| rhdd(snr_db, l, m, Signaling::Shaped);
    let lmax = lambda_max(m)?;
    if lmax == 0.0 {
        return Ok(LambdaOptimum {
            lambda: 0.0,
            r_hdd: f(0.0)?,
        });
    }
    let grid: Vec<f64> = (0..=LAMBDA_GRID)
        .map(|i| lmax * (i as f64 / LAMBDA_GRID as f64).powi(2))
        .collect();
    let values = grid.iter().map(|&l| f(l)).collect::<Result<Vec<_>, _>>()?;
    // first maximum, so ties prefer smaller lambda (uniform when rates saturate)
    let best = (0..values.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
    let mut opt = LambdaOptimum {
        lambda: grid[best],
        r_hdd: values[best],
    };
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(LAMBDA_GRID)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > LAMBDA_TOLERANCE {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d)?;
        }
    }
    for (l, v) in [(c, fc), (d, fd)] {
        if v > opt.r_hdd {
            opt = LambdaOptimum { lambda: l, r_hdd: v };
        }
    }
    Ok(opt)
}

/// Per-dimension frame rate minus the optimized hard-decision rate.
fn se_gap(snr_db: f64, params: &PasParams) -> Result<f64, ShapingError> {
    let opt = optimize_lambda(snr_db, params.m)?;
    let h = MbDistribution::new(opt.lambda, params.m)?.amplitude_entropy();
    Ok(h + params.gamma - opt.r_hdd)
}

/// SNR where the frame's spectral efficiency `2 (H(A) + γ)` meets the shaped
/// `2 R_HDD`, both along the `λ*(snr)` trajectory, in the default range.
pub fn crossing_point(params: &PasParams) -> Result<f64, AnalysisError> {
    crossing_point_in(params, CROSSING_SCAN_DB.0, CROSSING_SCAN_DB.1)
}

/// Crossing search over `[lo_db, hi_db]`.
///
/// The SE curve lies above the rate curve at low SNR. The range is scanned
/// on a 0.5 dB grid and the highest sign change of the gap is refined by
/// bisection to 1e-4 dB. A gap that is never positive means the frame is
/// feasible over the whole range; one still positive at `hi_db` means it
/// never becomes feasible there.
pub fn crossing_point_in(params: &PasParams, lo_db: f64, hi_db: f64) -> Result<f64, AnalysisError> {
    crossing_search(|s| se_gap(s, params), lo_db, hi_db)
}

/// Crossing search for a frame sent at a fixed shaping parameter: the SE
/// `2 (H(A_λ) + γ)` is constant and meets `2 R_HDD(snr, λ)`.
pub fn crossing_point_at_lambda(
    params: &PasParams,
    lambda: f64,
    lo_db: f64,
    hi_db: f64,
) -> Result<f64, AnalysisError> {
    let h = MbDistribution::new(lambda, params.m)?.amplitude_entropy();
    crossing_search(
        |s| Ok(h + params.gamma - rhdd(s, lambda, params.m, Signaling::Shaped)?),
        lo_db,
        hi_db,
    )
}

fn crossing_search<F>(gap: F, lo_db: f64, hi_db: f64) -> Result<f64, AnalysisError>
where
    F: Fn(f64) -> Result<f64, ShapingError> + Sync,
{
    if !(lo_db.is_finite() && hi_db.is_finite() && lo_db < hi_db) {
        return Err(AnalysisError::Range { lo_db, hi_db });
    }
    let steps = ((hi_db - lo_db) / CROSSING_STEP_DB).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| lo_db + (hi_db - lo_db) * i as f64 / steps as f64)
        .collect();
    let gaps = grid.par_iter().map(|&s| gap(s)).collect::<Result<Vec<_>, _>>()?;
    if *gaps.last().unwrap() > 0.0 {
        return Err(AnalysisError::NeverFeasible { lo_db, hi_db });
    }
    let Some(i) = gaps.iter().rposition(|&g| g > 0.0) else {
        return Err(AnalysisError::NoCrossing { lo_db, hi_db });
    };
    let (mut a, mut b) = (grid[i], grid[i + 1]);
    while b - a > 1e-4 {
        let mid = 0.5 * (a + b);
        if gap(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEfficiency {
    pub lambda_star: f64,
    pub h_amplitude: f64,
    /// `2 H(A) + 2 γ`, bits per QAM symbol.
    pub asymptotic_qam: f64,
    /// `2 (k + γn) / n` with `k` the matcher input length for the quantized
    /// composition.
    pub finite_qam: f64,
}

pub fn spectral_efficiency(params: &PasParams, snr_db: f64) -> Result<SpectralEfficiency, ShapingError> {
    let opt = optimize_lambda(snr_db, params.m)?;
    spectral_efficiency_at(params, opt.lambda)
}

/// Spectral efficiency for a given shaping parameter.
pub fn spectral_efficiency_at(params: &PasParams, lambda: f64) -> Result<SpectralEfficiency, ShapingError> {
    let dist = MbDistribution::new(lambda, params.m)?;
    let h = dist.amplitude_entropy();
    let k = ccdm_rate(&AmplitudeComposition::quantize(&dist, params.n)?);
    Ok(SpectralEfficiency {
        lambda_star: lambda,
        h_amplitude: h,
        asymptotic_qam: 2.0 * (h + params.gamma),
        finite_qam: 2.0 * (k + params.gamma_n) as f64 / params.n as f64,
    })
}

/// One row of a rate curve, QAM units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateCurvePoint {
    pub snr_db: f64,
    pub lambda_star: f64,
    pub r_hdd_shaped: f64,
    pub r_hdd_uniform: f64,
    pub h_amplitude: f64,
    pub gamma: f64,
}

impl RateCurvePoint {
    /// `2 H(A) + 2 γ`.
    pub fn se_frame(&self) -> f64 {
        2.0 * (self.h_amplitude + self.gamma)
    }
}

/// Shaped and uniform rate curves on `snrs_db`, evaluated in parallel.
pub fn rate_curve(m: u32, snrs_db: &[f64], gamma: f64) -> Result<Vec<RateCurvePoint>, ShapingError> {
    snrs_db
        .par_iter()
        .map(|&snr_db| {
            let opt = optimize_lambda(snr_db, m)?;
            Ok(RateCurvePoint {
                snr_db,
                lambda_star: opt.lambda,
                r_hdd_shaped: 2.0 * opt.r_hdd,
                r_hdd_uniform: 2.0 * rhdd(snr_db, 0.0, m, Signaling::Uniform)?,
                h_amplitude: MbDistribution::new(opt.lambda, m)?.amplitude_entropy(),
                gamma,
            })
        })
        .collect()
}

/// Writes `snr_db, lambda_star, r_hdd_shaped, r_hdd_uniform, se_frame`.
pub fn write_rate_curve_csv<W: std::io::Write>(points: &[RateCurvePoint], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["snr_db", "lambda_star", "r_hdd_shaped", "r_hdd_uniform", "se_frame"])?;
    for p in points {
        w.serialize((p.snr_db, p.lambda_star, p.r_hdd_shaped, p.r_hdd_uniform, p.se_frame()))?;
    }
    w.flush()?;
    Ok(())
}
