//! End-to-end PAS encoder and decoder for one product-code frame.

use std::sync::Arc;

use crate::bch::BchCode;
use crate::error::PasError;
use crate::product::{BitArray2D, DecodeReport, DecoderConfig, LlrArray2D, ProductCode};
use crate::shaping::ccdm::{AmplitudeComposition, CcdmCodec};
use crate::shaping::gray::{amplitude_index_bits, amplitude_index_from_bits};
use crate::shaping::mb::MbDistribution;

use super::demap::{Demapper, DemapperMode};
use super::interleaver::InterleaverMap;
use super::params::PasParams;

/// Where every array bit travels: array position `p` is bit level
/// `slot[p] % m` of symbol `slot[p] / m`.
///
/// The information vector `(b ∥ u^{γn})` is interleaved into the info block
/// row-major; `b` holds the `m - 1` amplitude bits of each symbol in symbol
/// order, so source bit `i < (m-1) n` is level `1 + i % (m-1)` of symbol
/// `i / (m-1)`, and `u^{γn}` bit `j` is the sign of symbol `j`. The parity
/// positions, read row-major over the whole array, are the signs of symbols
/// `γn, …, n-1`.
#[derive(Debug, Clone)]
pub struct Placement {
    m: usize,
    slot: Vec<u32>,
    position: Vec<u32>,
}

impl Placement {
    pub fn new(params: &PasParams, pi: &InterleaverMap) -> Self {
        let (nc, kc, m) = (params.n_c, params.k_c, params.m as usize);
        let amp_bits = params.amplitude_bits();
        let mut slot = vec![0u32; nc * nc];
        let mut parity = 0usize;
        for r in 0..nc {
            for c in 0..nc {
                let s = if r < kc && c < kc {
                    let i = pi.inverse(r * kc + c);
                    if i < amp_bits {
                        (i / (m - 1)) * m + 1 + i % (m - 1)
                    } else {
                        (i - amp_bits) * m
                    }
                } else {
                    parity += 1;
                    (params.gamma_n + parity - 1) * m
                };
                slot[r * nc + c] = s as u32;
            }
        }
        let mut position = vec![0u32; slot.len()];
        for (p, &s) in slot.iter().enumerate() {
            position[s as usize] = p as u32;
        }
        Self { m, slot, position }
    }

    /// `(symbol, level)` carried by array position `p`.
    pub fn slot(&self, p: usize) -> (usize, usize) {
        let s = self.slot[p] as usize;
        (s / self.m, s % self.m)
    }

    /// Array position of `(symbol, level)`.
    pub fn position(&self, symbol: usize, level: usize) -> usize {
        self.position[symbol * self.m + level] as usize
    }

    /// Symbol-major values to array order.
    pub fn scatter<T: Copy>(&self, symbol_major: &[T]) -> Vec<T> {
        self.slot.iter().map(|&s| symbol_major[s as usize]).collect()
    }

    /// Array order to symbol-major values.
    pub fn gather<T: Copy>(&self, array: &[T]) -> Vec<T> {
        self.position.iter().map(|&p| array[p as usize]).collect()
    }
}

/// One transmitted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TxFrame {
    /// The `k + γn` information bits.
    pub u: Vec<u8>,
    /// Amplitudes `1, 3, …`.
    pub amplitudes: Vec<i32>,
    /// `+1` or `-1`.
    pub signs: Vec<i8>,
    /// Channel input `delta * a_i * s_i`.
    pub x: Vec<f64>,
    /// The product-code codeword.
    pub array: BitArray2D,
}

/// Demapper output for one frame.
#[derive(Debug, Clone)]
pub struct DemapperOutput {
    /// Symbol-major hard bits, `m` per symbol, sign level first.
    pub bits: Vec<u8>,
    /// Symbol-major clipped LLRs, positive meaning bit 0.
    pub llrs: Vec<f64>,
    pub hard: BitArray2D,
    pub llr: LlrArray2D,
}

/// Receiver output for one frame.
#[derive(Debug, Clone)]
pub struct RxFrame {
    /// Estimate of `u`; the first `k` bits are zero when `dematch_failed`.
    pub u_hat: Vec<u8>,
    /// The decoded amplitudes did not form a matcher output.
    pub dematch_failed: bool,
    /// Hard decisions fed to the decoder, array order.
    pub channel_hard: BitArray2D,
    pub report: DecodeReport,
}

#[derive(Debug)]
struct Shared {
    params: PasParams,
    code: ProductCode,
    interleaver: InterleaverMap,
    placement: Placement,
    codec: CcdmCodec,
}

/// Everything needed to encode and decode frames for one parameter set and
/// one amplitude distribution. Cloning is cheap; [`with_snr_db`] rescales the
/// constellation without rebuilding the codes.
///
/// [`with_snr_db`]: Self::with_snr_db
#[derive(Debug, Clone)]
pub struct PasSystem {
    shared: Arc<Shared>,
    dist: MbDistribution,
    demapper: Demapper,
}

impl PasSystem {
    /// `dist` fixes the matcher composition (quantized to `n` symbols) and
    /// the transmit scale.
    pub fn new(params: PasParams, dist: &MbDistribution) -> Result<Self, PasError> {
        if dist.m() != params.m {
            return Err(PasError::BitsPerSymbol {
                dist: dist.m(),
                frame: params.m,
            });
        }
        let code = ProductCode::new(BchCode::new(params.v, params.t, params.s)?);
        let interleaver = InterleaverMap::new(params.k_c * params.k_c, params.seed);
        let placement = Placement::new(&params, &interleaver);
        let codec = CcdmCodec::new(AmplitudeComposition::quantize(dist, params.n)?);
        let shared = Arc::new(Shared {
            params,
            code,
            interleaver,
            placement,
            codec,
        });
        Ok(Self {
            shared,
            dist: dist.clone(),
            demapper: Demapper::new(dist),
        })
    }

    /// Same frame layout and matcher with the scale set for `snr_db`.
    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        self.with_distribution_scale(self.dist.with_snr_db(snr_db))
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        self.with_distribution_scale(self.dist.with_delta(delta))
    }

    fn with_distribution_scale(&self, dist: MbDistribution) -> Self {
        let demapper = Demapper::new(&dist)
            .with_mode(self.demapper.mode());
        Self {
            shared: Arc::clone(&self.shared),
            dist,
            demapper,
        }
    }

    pub fn with_demapper_mode(&self, mode: DemapperMode) -> Self {
        Self {
            demapper: self.demapper.clone().with_mode(mode),
            ..self.clone()
        }
    }

    pub fn with_llr_clip(&self, clip: f64) -> Self {
        Self {
            demapper: self.demapper.clone().with_clip(clip),
            ..self.clone()
        }
    }

    pub fn params(&self) -> &PasParams {
        &self.shared.params
    }

    pub fn code(&self) -> &ProductCode {
        &self.shared.code
    }

    pub fn interleaver(&self) -> &InterleaverMap {
        &self.shared.interleaver
    }

    pub fn placement(&self) -> &Placement {
        &self.shared.placement
    }

    pub fn codec(&self) -> &CcdmCodec {
        &self.shared.codec
    }

    pub fn distribution(&self) -> &MbDistribution {
        &self.dist
    }

    pub fn demapper(&self) -> &Demapper {
        &self.demapper
    }

    /// Matcher input bits `k`.
    pub fn k(&self) -> usize {
        self.shared.codec.k()
    }

    /// Frame input length `k + γn`.
    pub fn input_bits(&self) -> usize {
        self.k() + self.shared.params.gamma_n
    }

    /// Information bits per symbol at this block length, `(k + γn) / n`.
    pub fn finite_rate(&self) -> f64 {
        self.input_bits() as f64 / self.shared.params.n as f64
    }

    pub fn encode(&self, u: &[u8]) -> Result<TxFrame, PasError> {
        let sh = &*self.shared;
        let p = &sh.params;
        let m = p.m as usize;
        if u.len() != self.input_bits() {
            return Err(PasError::Length {
                what: "frame input",
                expected: self.input_bits(),
                actual: u.len(),
            });
        }
        let (u_k, u_g) = u.split_at(self.k());
        let idx = sh.codec.match_bits(u_k)?;
        let mut src = vec![0u8; p.k_c * p.k_c];
        for (i, &a) in idx.iter().enumerate() {
            amplitude_index_bits(a, p.m, &mut src[i * (m - 1)..(i + 1) * (m - 1)]);
        }
        src[p.amplitude_bits()..].copy_from_slice(u_g);
        let info = sh.interleaver.interleave(&src);
        let array = sh.code.encode(&info)?;
        let bits = array.as_slice();
        let delta = self.dist.delta();
        let mut amplitudes = Vec::with_capacity(p.n);
        let mut signs = Vec::with_capacity(p.n);
        let mut x = Vec::with_capacity(p.n);
        for (i, &a) in idx.iter().enumerate() {
            let amp = 2 * a as i32 + 1;
            let sign = 1 - 2 * bits[sh.placement.position(i, 0)] as i8;
            amplitudes.push(amp);
            signs.push(sign);
            x.push(delta * (amp * sign as i32) as f64);
        }
        Ok(TxFrame {
            u: u.to_vec(),
            amplitudes,
            signs,
            x,
            array,
        })
    }

    pub fn map_demap(&self, y: &[f64]) -> Result<DemapperOutput, PasError> {
        let sh = &*self.shared;
        let n = sh.params.n;
        if y.len() != n {
            return Err(PasError::Length {
                what: "channel output",
                expected: n,
                actual: y.len(),
            });
        }
        let (bits, llrs) = self.demapper.demap(y);
        let nc = sh.params.n_c;
        let hard = BitArray2D::from_vec(nc, sh.placement.scatter(&bits))?;
        let llr = LlrArray2D::from_vec(nc, sh.placement.scatter(&llrs))?;
        Ok(DemapperOutput {
            bits,
            llrs,
            hard,
            llr,
        })
    }

    /// Demaps, decodes and de-shapes. Both decoders start from the
    /// demapper's hard bits; iBDD-CR also combines with the LLRs.
    pub fn decode(&self, y: &[f64], cfg: &DecoderConfig) -> Result<RxFrame, PasError> {
        let demapped = self.map_demap(y)?;
        self.decode_demapped(demapped, cfg)
    }

    pub fn decode_demapped(
        &self,
        demapped: DemapperOutput,
        cfg: &DecoderConfig,
    ) -> Result<RxFrame, PasError> {
        let sh = &*self.shared;
        let p = &sh.params;
        let m = p.m as usize;
        let report = match cfg.mode {
            crate::product::DecoderMode::Ibdd => sh.code.decode_ibdd(&demapped.hard, cfg)?,
            crate::product::DecoderMode::IbddCr => sh.code.decode_ibdd_cr_from(&demapped.hard, &demapped.llr, cfg)?,
        };
        let src = sh.interleaver.deinterleave(&report.info);
        let (b, u_g) = src.split_at(p.amplitude_bits());
        let idx: Vec<usize> = if m > 1 {
            b.chunks(m - 1).map(amplitude_index_from_bits).collect()
        } else {
            vec![0; p.n]
        };
        let (u_k, dematch_failed) = match sh.codec.dematch(&idx) {
            Ok(bits) => (bits, false),
            Err(_) => (vec![0u8; self.k()], true),
        };
        let mut u_hat = u_k;
        u_hat.extend_from_slice(u_g);
        Ok(RxFrame {
            u_hat,
            dematch_failed,
            channel_hard: demapped.hard,
            report,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> PasSystem {
        let p = PasParams::derive(4, 1, 1, 2, 5).unwrap();
        let d = MbDistribution::new(0.1, 2).unwrap().with_snr_db(12.0);
        PasSystem::new(p, &d).unwrap()
    }

    #[test]
    fn placement_is_a_bijection() {
        let sys = toy();
        let pl = sys.placement();
        let nn = sys.params().n_c * sys.params().n_c;
        let vals: Vec<usize> = (0..nn).collect();
        assert_eq!(pl.gather(&pl.scatter(&vals)), vals);
        for p in 0..nn {
            let (s, l) = pl.slot(p);
            assert_eq!(pl.position(s, l), p);
        }
    }

    #[test]
    fn noiseless_round_trip() {
        let sys = toy();
        let u: Vec<u8> = (0..sys.input_bits()).map(|i| (i * 7 % 3 == 0) as u8).collect();
        let tx = sys.encode(&u).unwrap();
        assert!(sys.code().is_codeword(&tx.array));
        let rx = sys.decode(&tx.x, &DecoderConfig::ibdd(4)).unwrap();
        assert!(!rx.dematch_failed);
        assert_eq!(rx.u_hat, u);
    }

    #[test]
    fn input_length_is_checked() {
        let sys = toy();
        assert!(sys.encode(&[0; 3]).is_err());
        assert!(sys.map_demap(&[0.0; 3]).is_err());
    }
}
