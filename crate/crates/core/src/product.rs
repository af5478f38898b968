//! Product codes over a symmetric BCH component code and their iterative
//! hard-decision decoders.
//!
//! Arrays are `n_c x n_c`, row-major. The systematic information block is the
//! top-left `k_c x k_c` corner.

use serde::{Deserialize, Serialize};

use crate::bch::BchCode;
use crate::error::CodeError;

/// An `n x n` array of hard bits (values 0/1), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitArray2D {
    n: usize,
    bits: Vec<u8>,
}

impl BitArray2D {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            bits: vec![0; n * n],
        }
    }

    pub fn from_vec(n: usize, bits: Vec<u8>) -> Result<Self, CodeError> {
        if bits.len() != n * n {
            return Err(CodeError::Dimension {
                expected: n,
                rows: bits.len() / n.max(1),
                cols: n,
            });
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.bits[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: u8) {
        self.bits[r * self.n + c] = b;
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.n + c] ^= 1;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.bits[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.bits
    }

    /// Number of positions where `self` and `other` differ.
    pub fn distance(&self, other: &BitArray2D) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Channel log-likelihood ratios aligned with a [`BitArray2D`]. Positive
/// values favour bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrArray2D {
    n: usize,
    llrs: Vec<f64>,
}

impl LlrArray2D {
    pub fn from_vec(n: usize, llrs: Vec<f64>) -> Result<Self, CodeError> {
        if llrs.len() != n * n {
            return Err(CodeError::Dimension {
                expected: n,
                rows: llrs.len() / n.max(1),
                cols: n,
            });
        }
        Ok(Self { n, llrs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.llrs[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, l: f64) {
        self.llrs[r * self.n + c] = l;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.llrs
    }

    /// Sign quantization, ties to bit 0.
    pub fn hard_decisions(&self) -> BitArray2D {
        BitArray2D {
            n: self.n,
            bits: self.llrs.iter().map(|&l| hard_bit(l)).collect(),
        }
    }
}

#[inline]
pub(crate) fn hard_bit(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderMode {
    Ibdd,
    IbddCr,
}

/// Iterative decoder settings. One iteration is a row half-iteration followed
/// by a column half-iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderConfig {
    pub mode: DecoderMode,
    pub max_iterations: usize,
    /// Per-half-iteration weights `w_l` for iBDD-CR, `2 * max_iterations` of
    /// them. Ignored by iBDD.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// Default iBDD-CR weight schedule for 8 iterations. Found by
/// `sim::calibrate_weights` on the 4-ASK (6,2,1) frame at 9 dB with the
/// rate-optimal shaping: the best constant schedule (16, from 4..48) refined
/// coordinate-wise over {4, 8, 12, 16, 20, 24, 32} on 2000 frames. Weights
/// are in LLR units, so other SNRs and constellations may want their own.
pub const DEFAULT_CR_WEIGHTS: [f64; 16] = [
    4.0, 4.0, 4.0, 4.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0,
];

impl DecoderConfig {
    pub fn ibdd(max_iterations: usize) -> Self {
        Self {
            mode: DecoderMode::Ibdd,
            max_iterations,
            weights: None,
        }
    }

    pub fn ibdd_cr(weights: Vec<f64>) -> Self {
        Self {
            mode: DecoderMode::IbddCr,
            max_iterations: weights.len().div_ceil(2),
            weights: Some(weights),
        }
    }

    /// iBDD-CR with the shipped default schedule, stretched or truncated to
    /// `max_iterations`.
    pub fn ibdd_cr_default(max_iterations: usize) -> Self {
        let weights = (0..2 * max_iterations)
            .map(|l| DEFAULT_CR_WEIGHTS[l.min(DEFAULT_CR_WEIGHTS.len() - 1)])
            .collect();
        Self {
            mode: DecoderMode::IbddCr,
            max_iterations,
            weights: Some(weights),
        }
    }

    pub fn validate(&self) -> Result<(), CodeError> {
        if self.max_iterations == 0 {
            return Err(CodeError::Iterations);
        }
        if self.mode == DecoderMode::IbddCr {
            let expected = 2 * self.max_iterations;
            let w = self.weights.as_ref().ok_or(CodeError::Weights {
                expected,
                actual: 0,
            })?;
            if w.len() != expected {
                return Err(CodeError::Weights {
                    expected,
                    actual: w.len(),
                });
            }
            if w.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                return Err(CodeError::WeightValue);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeReport {
    /// Decoded information block, `k_c^2` bits row-major.
    pub info: Vec<u8>,
    /// Final hard array.
    pub array: BitArray2D,
    /// All rows and columns of `array` are component codewords.
    pub converged: bool,
    pub iterations_used: usize,
    pub half_iterations: usize,
}

/// A product code with identical row and column BCH components.
#[derive(Debug, Clone)]
pub struct ProductCode {
    component: BchCode,
}

impl ProductCode {
    pub fn new(component: BchCode) -> Self {
        Self { component }
    }

    pub fn component(&self) -> &BchCode {
        &self.component
    }

    /// Component length `n_c`.
    pub fn n(&self) -> usize {
        self.component.n()
    }

    /// Component dimension `k_c`.
    pub fn k(&self) -> usize {
        self.component.k()
    }

    pub fn rate(&self) -> f64 {
        let (k, n) = (self.k() as f64, self.n() as f64);
        (k * k) / (n * n)
    }

    /// Systematic encoding of a `k_c x k_c` row-major information block:
    /// rows first, then every column.
    pub fn encode(&self, info: &[u8]) -> Result<BitArray2D, CodeError> {
        let (n, k) = (self.n(), self.k());
        if info.len() != k * k {
            return Err(CodeError::Dimension {
                expected: k,
                rows: info.len() / k.max(1),
                cols: k,
            });
        }
        let mut array = BitArray2D::zeros(n);
        for r in 0..k {
            let row = &mut array.bits[r * n..(r + 1) * n];
            row[..k].copy_from_slice(&info[r * k..(r + 1) * k]);
            self.component.encode_in_place(row);
        }
        let mut col = vec![0u8; n];
        for c in 0..n {
            for (r, b) in col[..k].iter_mut().enumerate() {
                *b = array.get(r, c);
            }
            self.component.encode_in_place(&mut col);
            for (r, &b) in col.iter().enumerate().skip(k) {
                array.set(r, c, b);
            }
        }
        Ok(array)
    }

    /// Same array as [`encode`](Self::encode), computed columns first.
    pub fn encode_columns_first(&self, info: &[u8]) -> Result<BitArray2D, CodeError> {
        let k = self.k();
        if info.len() != k * k {
            return Err(CodeError::Dimension {
                expected: k,
                rows: info.len() / k.max(1),
                cols: k,
            });
        }
        let mut transposed = vec![0u8; k * k];
        for r in 0..k {
            for c in 0..k {
                transposed[c * k + r] = info[r * k + c];
            }
        }
        let t = self.encode(&transposed)?;
        let n = self.n();
        let mut out = BitArray2D::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, t.get(c, r));
            }
        }
        Ok(out)
    }

    /// True if every row and column is a component codeword.
    pub fn is_codeword(&self, array: &BitArray2D) -> bool {
        array.n() == self.n() && self.rows_valid(array) && self.columns_valid(array)
    }

    fn rows_valid(&self, array: &BitArray2D) -> bool {
        (0..self.n()).all(|r| self.component.is_codeword(array.row(r)))
    }

    fn columns_valid(&self, array: &BitArray2D) -> bool {
        let mut col = vec![0u8; self.n()];
        (0..self.n()).all(|c| {
            gather(array, Line::Column(c), &mut col);
            self.component.is_codeword(&col)
        })
    }

    /// Extracts the `k_c x k_c` information block.
    pub fn info_block(&self, array: &BitArray2D) -> Vec<u8> {
        let k = self.k();
        let mut info = Vec::with_capacity(k * k);
        for r in 0..k {
            info.extend_from_slice(&array.row(r)[..k]);
        }
        info
    }

    fn check_dims(&self, n: usize) -> Result<(), CodeError> {
        if n != self.n() {
            return Err(CodeError::Dimension {
                expected: self.n(),
                rows: n,
                cols: n,
            });
        }
        Ok(())
    }

    /// Iterative BDD with extrinsic message passing.
    ///
    /// Each component word is decoded from the current messages. On success
    /// the messages of that word become the decoded codeword; on failure they
    /// are reset to the channel hard decisions. Rows go first in every
    /// iteration. Decoding stops as soon as the array is a product codeword.
    pub fn decode_ibdd(
        &self,
        channel: &BitArray2D,
        cfg: &DecoderConfig,
    ) -> Result<DecodeReport, CodeError> {
        cfg.validate()?;
        if cfg.mode != DecoderMode::Ibdd {
            return Err(CodeError::Mode("ibdd_cr"));
        }
        self.check_dims(channel.n())?;
        let n = self.n();
        let mut msg = channel.clone();
        let mut buf = vec![0u8; n];
        let mut converged = false;
        let mut half = 0;
        while half < 2 * cfg.max_iterations {
            let by_rows = half % 2 == 0;
            half += 1;
            let mut all_ok = true;
            for i in 0..n {
                let line = if by_rows { Line::Row(i) } else { Line::Column(i) };
                gather(&msg, line, &mut buf);
                match self.component.correct_in_place(&mut buf) {
                    Some(_) => scatter(&mut msg, line, &buf),
                    None => {
                        all_ok = false;
                        gather(channel, line, &mut buf);
                        scatter(&mut msg, line, &buf);
                    }
                }
            }
            if all_ok {
                let other_ok = if by_rows {
                    self.columns_valid(&msg)
                } else {
                    self.rows_valid(&msg)
                };
                if other_ok {
                    converged = true;
                    break;
                }
            }
        }
        Ok(self.report(msg, converged, half))
    }

    /// iBDD with combined reliability, starting from the signs of `channel`.
    ///
    /// Messages start as the sign of the channel LLRs. In half-iteration `l`
    /// every component word is BDD-decoded; a decoded bit gives a verdict
    /// `mu = +1` (bit 0) or `-1` (bit 1), a failure gives `mu = 0`. The next
    /// message is the sign of `w_l * mu + L`, with ties resolving to bit 0.
    /// The output array holds the signs from the last half-iteration.
    pub fn decode_ibdd_cr(
        &self,
        channel: &LlrArray2D,
        cfg: &DecoderConfig,
    ) -> Result<DecodeReport, CodeError> {
        self.decode_ibdd_cr_from(&channel.hard_decisions(), channel, cfg)
    }

    /// iBDD-CR whose first messages are `channel_hd` rather than the LLR
    /// signs, e.g. symbol-wise hard decisions. Later messages combine the
    /// BDD verdicts with `channel` as in [`decode_ibdd_cr`](Self::decode_ibdd_cr).
    pub fn decode_ibdd_cr_from(
        &self,
        channel_hd: &BitArray2D,
        channel: &LlrArray2D,
        cfg: &DecoderConfig,
    ) -> Result<DecodeReport, CodeError> {
        cfg.validate()?;
        if cfg.mode != DecoderMode::IbddCr {
            return Err(CodeError::Mode("ibdd"));
        }
        self.check_dims(channel.n())?;
        self.check_dims(channel_hd.n())?;
        let weights = cfg.weights.as_deref().expect("validated");
        let n = self.n();
        let mut msg = channel_hd.clone();
        let mut buf = vec![0u8; n];
        let mut llr = vec![0f64; n];
        let mut converged = false;
        let mut half = 0;
        while half < 2 * cfg.max_iterations {
            let by_rows = half % 2 == 0;
            let w = weights[half];
            half += 1;
            let mut lines_are_codewords = true;
            for i in 0..n {
                let line = if by_rows { Line::Row(i) } else { Line::Column(i) };
                gather(&msg, line, &mut buf);
                gather_llr(channel, line, &mut llr);
                let decoded = self.component.correct_in_place(&mut buf).is_some();
                let overridden = combine_line(decoded, &mut buf, &llr, w);
                lines_are_codewords &= decoded && !overridden;
                scatter(&mut msg, line, &buf);
            }
            let done = if lines_are_codewords {
                if by_rows {
                    self.columns_valid(&msg)
                } else {
                    self.rows_valid(&msg)
                }
            } else {
                self.is_codeword(&msg)
            };
            if done {
                converged = true;
                break;
            }
        }
        Ok(self.report(msg, converged, half))
    }

    /// Dispatches on `cfg.mode`. iBDD uses the sign of `channel`.
    pub fn decode(&self, channel: &LlrArray2D, cfg: &DecoderConfig) -> Result<DecodeReport, CodeError> {
        match cfg.mode {
            DecoderMode::Ibdd => self.decode_ibdd(&channel.hard_decisions(), cfg),
            DecoderMode::IbddCr => self.decode_ibdd_cr(channel, cfg),
        }
    }

    fn report(&self, array: BitArray2D, converged: bool, half: usize) -> DecodeReport {
        DecodeReport {
            info: self.info_block(&array),
            array,
            converged,
            iterations_used: half.div_ceil(2),
            half_iterations: half,
        }
    }
}

/// Replaces `buf` (the BDD output, meaningful only when `decoded`) by the
/// sign of `w * mu + L`. Returns true if any decoded bit was overridden.
fn combine_line(decoded: bool, buf: &mut [u8], llr: &[f64], w: f64) -> bool {
    let mut overridden = false;
    for (b, &l) in buf.iter_mut().zip(llr) {
        let mu = match (decoded, *b) {
            (false, _) => 0.0,
            (true, 0) => 1.0,
            (true, _) => -1.0,
        };
        let next = hard_bit(w * mu + l);
        overridden |= decoded && next != *b;
        *b = next;
    }
    overridden
}

#[derive(Debug, Clone, Copy)]
enum Line {
    Row(usize),
    Column(usize),
}

fn gather(array: &BitArray2D, line: Line, out: &mut [u8]) {
    match line {
        Line::Row(r) => out.copy_from_slice(array.row(r)),
        Line::Column(c) => {
            for (r, o) in out.iter_mut().enumerate() {
                *o = array.get(r, c);
            }
        }
    }
}

fn gather_llr(array: &LlrArray2D, line: Line, out: &mut [f64]) {
    let n = array.n();
    match line {
        Line::Row(r) => out.copy_from_slice(&array.llrs[r * n..(r + 1) * n]),
        Line::Column(c) => {
            for (r, o) in out.iter_mut().enumerate() {
                *o = array.get(r, c);
            }
        }
    }
}

fn scatter(array: &mut BitArray2D, line: Line, src: &[u8]) {
    let n = array.n();
    match line {
        Line::Row(r) => array.bits[r * n..(r + 1) * n].copy_from_slice(src),
        Line::Column(c) => {
            for (r, &b) in src.iter().enumerate() {
                array.set(r, c, b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming_pc() -> ProductCode {
        ProductCode::new(BchCode::new(4, 1, 0).unwrap())
    }

    #[test]
    fn rate_identity() {
        let pc = ProductCode::new(BchCode::new(10, 3, 605).unwrap());
        assert!((pc.rate() - 388.0f64.powi(2) / 418.0f64.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn zero_info_zero_array() {
        let pc = hamming_pc();
        let a = pc.encode(&[0; 121]).unwrap();
        assert!(a.as_slice().iter().all(|&b| b == 0));
    }

    #[test]
    fn dimension_errors() {
        let pc = hamming_pc();
        assert!(pc.encode(&[0; 120]).is_err());
        let wrong = BitArray2D::zeros(14);
        assert!(pc.decode_ibdd(&wrong, &DecoderConfig::ibdd(4)).is_err());
    }

    #[test]
    fn decoder_config_validation() {
        let pc = hamming_pc();
        let a = BitArray2D::zeros(15);
        let mut cfg = DecoderConfig::ibdd_cr_default(4);
        assert!(pc.decode_ibdd(&a, &cfg).is_err());
        cfg.weights = None;
        assert_eq!(
            cfg.validate(),
            Err(CodeError::Weights {
                expected: 8,
                actual: 0
            })
        );
        cfg.weights = Some(vec![1.0; 7]);
        assert!(cfg.validate().is_err());
        cfg.weights = Some(vec![-1.0; 8]);
        assert_eq!(cfg.validate(), Err(CodeError::WeightValue));
        assert_eq!(DecoderConfig::ibdd(0).validate(), Err(CodeError::Iterations));
    }

    #[test]
    fn error_free_input_converges_in_one_half_iteration() {
        let pc = hamming_pc();
        let info: Vec<u8> = (0..121).map(|i| ((i * 5 + 1) % 3 == 0) as u8).collect();
        let cw = pc.encode(&info).unwrap();
        let rep = pc.decode_ibdd(&cw, &DecoderConfig::ibdd(8)).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.half_iterations, 1);
        assert_eq!(rep.info, info);
    }

    #[test]
    fn failed_words_fall_back_to_channel_signs() {
        let llr = [0.3, -0.1, 0.0, -4.0, 2.0];
        let mut buf = [1, 1, 1, 0, 1];
        let overridden = combine_line(false, &mut buf, &llr, 3.0);
        assert!(!overridden);
        assert_eq!(buf, [0, 1, 0, 1, 0]);
    }

    #[test]
    fn verdict_beats_weak_channel_and_ties_go_to_zero() {
        let llr = [0.3, -0.1, 2.0, -4.0, -2.0];
        let mut buf = [1, 0, 1, 1, 0];
        let overridden = combine_line(true, &mut buf, &llr, 2.0);
        // psi = [-1.7, 1.9, 0.0, -6.0, 0.0]
        assert_eq!(buf, [1, 0, 0, 1, 0]);
        assert!(overridden);
    }
}
