//! Monte Carlo block-error measurement and operating-point search.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::channel::awgn_transmit;
use super::config::SimConfig;
use super::stats::{clopper_pearson, frame_seed, noise_seed};
use crate::analysis::{crossing_point_at_lambda, crossing_point_in, optimize_lambda, spectral_efficiency_at};
use crate::error::{AnalysisError, SimError};
use crate::pipeline::{PasParams, PasSystem};
use crate::product::{BitArray2D, DecoderConfig, LlrArray2D};
use crate::shaping::MbDistribution;

/// Environment variable holding the worker count. Unset or 0 means one
/// worker per core.
pub const WORKERS_ENV: &str = "SHAPED_PC_WORKERS";

/// Frames simulated per parallel batch. Batches are consumed in frame order
/// and the stop rule is checked after every frame, so the counts do not
/// depend on the worker count.
pub const BATCH_FRAMES: u64 = 64;

/// Confidence level of the reported intervals.
pub const CONFIDENCE: f64 = 0.95;

/// Resolution of the operating-point bisection, dB.
pub const OPERATING_POINT_RESOLUTION_DB: f64 = 0.05;

/// Outcome at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrResult {
    pub snr_db: f64,
    pub lambda: f64,
    pub delta: f64,
    pub frames: u64,
    pub block_errors: u64,
    /// `block_errors / frames`.
    pub pe: f64,
    pub pe_low: f64,
    pub pe_high: f64,
    /// Information bit errors after dematching.
    pub bit_errors: u64,
    pub info_bits: u64,
    /// Demapper hard-decision errors over the whole array.
    pub channel_bit_errors: u64,
    pub channel_bits: u64,
    pub dematch_failures: u64,
    /// Not serialized, so result JSON is reproducible.
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl SnrResult {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.info_bits)
    }

    /// Bit error rate before decoding.
    pub fn pre_fec_ber(&self) -> f64 {
        ratio(self.channel_bit_errors, self.channel_bits)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub config_digest: String,
    pub seed: u64,
    pub points: Vec<SnrResult>,
}

impl SimResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// One row per SNR, including wall time.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), SimError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "snr_db",
            "lambda",
            "frames",
            "block_errors",
            "pe",
            "pe_low",
            "pe_high",
            "pre_fec_ber",
            "ber",
            "wall_time_s",
            "seed",
            "config_digest",
        ])?;
        for p in &self.points {
            w.serialize((
                p.snr_db,
                p.lambda,
                p.frames,
                p.block_errors,
                p.pe,
                p.pe_low,
                p.pe_high,
                p.pre_fec_ber(),
                p.ber(),
                p.wall_time_s,
                self.seed,
                &self.config_digest,
            ))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Worker count from [`WORKERS_ENV`].
pub fn workers_from_env() -> Result<usize, SimError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| SimError::Config(format!("{WORKERS_ENV}={s:?} is not a count"))),
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, SimError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Config(format!("thread pool: {e}")))
}

/// Information bits of a frame: bit `i` is bit `i % 64` of the `i / 64`-th
/// output word of `ChaCha8Rng::seed_from_u64(seed)`.
pub fn frame_bits(seed: u64, len: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let w = rng.next_u64();
        let take = (len - out.len()).min(64);
        out.extend((0..take).map(|b| ((w >> b) & 1) as u8));
    }
    out
}

#[derive(Debug, Clone, Copy, Default)]
struct FrameOutcome {
    block_error: bool,
    bit_errors: u64,
    channel_bit_errors: u64,
    dematch_failed: bool,
}

/// Encoder, channel and decoder state for one SNR.
struct Point {
    sys: PasSystem,
    snr_db: f64,
    lambda: f64,
}

impl Point {
    fn new(params: &PasParams, cfg: &SimConfig, snr_db: f64) -> Result<Self, SimError> {
        let lambda = match cfg.lambda {
            Some(l) => l,
            None => optimize_lambda(snr_db, params.m)?.lambda,
        };
        let dist = MbDistribution::new(lambda, params.m)?.with_snr_db(snr_db);
        let sys = PasSystem::new(params.clone(), &dist)?.with_demapper_mode(cfg.demapper);
        Ok(Self { sys, snr_db, lambda })
    }

    fn frame(&self, cfg: &SimConfig, index: u64) -> Result<FrameOutcome, SimError> {
        let fs = frame_seed(cfg.seed, index);
        let u = frame_bits(fs, self.sys.input_bits());
        let tx = self.sys.encode(&u)?;
        let y = if cfg.noiseless {
            tx.x.clone()
        } else {
            awgn_transmit(&tx.x, noise_seed(fs))
        };
        let rx = self.sys.decode(&y, &cfg.decoder)?;
        let bit_errors = u.iter().zip(&rx.u_hat).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome {
            block_error: bit_errors > 0,
            bit_errors,
            channel_bit_errors: rx.channel_hard.distance(&tx.array) as u64,
            dematch_failed: rx.dematch_failed,
        })
    }

    fn run(&self, cfg: &SimConfig, pool: &rayon::ThreadPool) -> Result<SnrResult, SimError> {
        let start = Instant::now();
        let stop = cfg.stop;
        let mut acc = FrameOutcome::default();
        let (mut frames, mut block_errors, mut dematch_failures) = (0u64, 0u64, 0u64);
        'batches: while frames < stop.max_frames {
            let first = frames;
            let count = BATCH_FRAMES.min(stop.max_frames - frames);
            let batch: Vec<Result<FrameOutcome, SimError>> = pool.install(|| {
                (first..first + count)
                    .into_par_iter()
                    .map(|i| self.frame(cfg, i))
                    .collect()
            });
            for outcome in batch {
                let o = outcome?;
                frames += 1;
                block_errors += o.block_error as u64;
                dematch_failures += o.dematch_failed as u64;
                acc.bit_errors += o.bit_errors;
                acc.channel_bit_errors += o.channel_bit_errors;
                if block_errors >= stop.min_block_errors {
                    break 'batches;
                }
            }
        }
        let (pe_low, pe_high) = clopper_pearson(block_errors, frames, CONFIDENCE);
        let p = self.sys.params();
        Ok(SnrResult {
            snr_db: self.snr_db,
            lambda: self.lambda,
            delta: self.sys.distribution().delta(),
            frames,
            block_errors,
            pe: ratio(block_errors, frames),
            pe_low,
            pe_high,
            bit_errors: acc.bit_errors,
            info_bits: frames * self.sys.input_bits() as u64,
            channel_bit_errors: acc.channel_bit_errors,
            channel_bits: frames * (p.n_c * p.n_c) as u64,
            dematch_failures,
            wall_time_s: start.elapsed().as_secs_f64(),
        })
    }
}

fn params_of(cfg: &SimConfig) -> Result<PasParams, SimError> {
    Ok(PasParams::derive(cfg.v, cfg.t, cfg.s, cfg.m, cfg.interleaver_seed)?)
}

/// Runs every SNR in `cfg.snr_db` with the worker count from
/// [`WORKERS_ENV`].
pub fn run_montecarlo(cfg: &SimConfig) -> Result<SimResult, SimError> {
    run_montecarlo_with_workers(cfg, workers_from_env()?)
}

/// Frame `i` at every SNR uses the information bits and noise drawn from
/// `frame_seed(seed, i)`. `workers = 0` means one per core.
pub fn run_montecarlo_with_workers(cfg: &SimConfig, workers: usize) -> Result<SimResult, SimError> {
    cfg.validate()?;
    let params = params_of(cfg)?;
    let pool = thread_pool(workers)?;
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for &snr_db in &cfg.snr_db {
        points.push(Point::new(&params, cfg, snr_db)?.run(cfg, &pool)?);
    }
    Ok(SimResult {
        config_digest: cfg.digest(),
        seed: cfg.seed,
        points,
    })
}

/// Smallest SNR meeting the target block error probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub s: u32,
    pub gamma: f64,
    pub target_pe: f64,
    pub snr_op_db: f64,
    pub lambda: f64,
    /// `2 H(A) + 2 γ` at the operating point, bits per QAM symbol.
    pub se: f64,
    /// Crossing SNR, when one lies inside the search bracket.
    pub crossing_db: Option<f64>,
    /// `snr_op - crossing`.
    pub backoff_db: Option<f64>,
    /// Simulated SNR points, in probe order.
    pub probes: usize,
    /// Measurement at the operating point.
    pub at_op: SnrResult,
    pub config_digest: String,
}

pub fn find_operating_point(cfg: &SimConfig) -> Result<OperatingPoint, SimError> {
    find_operating_point_with_workers(cfg, workers_from_env()?)
}

/// Bisection over `cfg.search` for the smallest SNR whose upper 95 %
/// Clopper–Pearson bound on `P_e` is at most `cfg.target_pe`, to 0.05 dB.
///
/// The lower edge is raised to the crossing SNR when the frame has one in
/// the bracket: along `λ*(snr)` without a fixed `lambda`, at the fixed
/// `lambda` otherwise. A frame whose SE stays above the rate curve across
/// the bracket is an error, as is an upper edge that does not meet the
/// target.
pub fn find_operating_point_with_workers(cfg: &SimConfig, workers: usize) -> Result<OperatingPoint, SimError> {
    cfg.validate()?;
    let bracket = cfg
        .search
        .ok_or_else(|| SimError::Config("operating-point search needs `search`".into()))?;
    let params = params_of(cfg)?;
    let pool = thread_pool(workers)?;
    let crossing = match cfg.lambda {
        None => crossing_point_in(&params, bracket.lo_db, bracket.hi_db),
        Some(l) => crossing_point_at_lambda(&params, l, bracket.lo_db, bracket.hi_db),
    };
    let crossing_db = match crossing {
        Ok(c) => Some(c),
        Err(AnalysisError::NoCrossing { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut probes = 0;
    let mut probe = |snr_db: f64| -> Result<SnrResult, SimError> {
        probes += 1;
        Point::new(&params, cfg, snr_db)?.run(cfg, &pool)
    };
    let meets = |r: &SnrResult| r.pe_high <= cfg.target_pe;

    let mut lo = crossing_db.map_or(bracket.lo_db, |c| c.max(bracket.lo_db));
    let mut hi = bracket.hi_db;
    let mut best = probe(hi)?;
    if !meets(&best) {
        return Err(SimError::Budget {
            target: cfg.target_pe,
            snr_db: hi,
            upper: best.pe_high,
        });
    }
    let at_lo = probe(lo)?;
    if meets(&at_lo) {
        best = at_lo;
        hi = lo;
    }
    while hi - lo > OPERATING_POINT_RESOLUTION_DB {
        let mid = 0.5 * (lo + hi);
        let r = probe(mid)?;
        if meets(&r) {
            hi = mid;
            best = r;
        } else {
            lo = mid;
        }
    }
    let se = spectral_efficiency_at(&params, best.lambda)?.asymptotic_qam;
    Ok(OperatingPoint {
        s: params.s,
        gamma: params.gamma,
        target_pe: cfg.target_pe,
        snr_op_db: hi,
        lambda: best.lambda,
        se,
        crossing_db,
        backoff_db: crossing_db.map(|c| hi - c),
        probes,
        at_op: best,
        config_digest: cfg.digest(),
    })
}

/// Result of [`calibrate_weights`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightCalibration {
    pub weights: Vec<f64>,
    /// Product-code decoding failures on the corpus with `weights`.
    pub block_errors: u64,
    /// The same with the starting schedule.
    pub initial_block_errors: u64,
    pub frames: u64,
}

/// Coordinate-wise search for an iBDD-CR weight schedule.
///
/// `frames` frames are drawn once at the scale of `sys` from `seed` as in
/// [`run_montecarlo`]. Each half-iteration weight in turn is set to the
/// candidate with the fewest array decoding errors on that corpus, the
/// others held fixed; ties keep the current value.
pub fn calibrate_weights(
    sys: &PasSystem,
    initial: &[f64],
    candidates: &[f64],
    frames: u64,
    seed: u64,
) -> Result<WeightCalibration, SimError> {
    let corpus: Vec<(BitArray2D, BitArray2D, LlrArray2D)> = (0..frames)
        .into_par_iter()
        .map(|i| {
            let fs = frame_seed(seed, i);
            let tx = sys.encode(&frame_bits(fs, sys.input_bits()))?;
            let y = awgn_transmit(&tx.x, noise_seed(fs));
            let d = sys.map_demap(&y)?;
            Ok((tx.array, d.hard, d.llr))
        })
        .collect::<Result<_, SimError>>()?;
    let errors = |w: &[f64]| -> Result<u64, SimError> {
        let cfg = DecoderConfig::ibdd_cr(w.to_vec());
        corpus
            .par_iter()
            .map(|(tx, hard, llr)| {
                let r = sys.code().decode_ibdd_cr_from(hard, llr, &cfg)?;
                Ok((r.array != *tx) as u64)
            })
            .sum()
    };
    let mut weights = initial.to_vec();
    let initial_block_errors = errors(&weights)?;
    let mut best = initial_block_errors;
    for l in 0..weights.len() {
        let mut keep = weights[l];
        for &c in candidates {
            if c == keep {
                continue;
            }
            weights[l] = c;
            let e = errors(&weights)?;
            if e < best {
                best = e;
                keep = c;
            }
        }
        weights[l] = keep;
    }
    Ok(WeightCalibration {
        weights,
        block_errors: best,
        initial_block_errors,
        frames,
    })
}
