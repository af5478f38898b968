//! MAP demapping of `2^m`-ASK observations into bit-level LLRs and hard bits.

use serde::{Deserialize, Serialize};

use crate::shaping::gray::brgc_label;
use crate::shaping::mb::{MbDistribution, MAX_BITS_PER_SYMBOL};

const MAX_M: usize = MAX_BITS_PER_SYMBOL as usize;

/// Default LLR magnitude limit (natural-log units).
pub const DEFAULT_LLR_CLIP: f64 = 40.0;

/// How hard bits are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemapperMode {
    /// Hard bit `l` is the sign of `L^l` (0 iff `L^l >= 0`).
    #[default]
    BitWise,
    /// Hard bits are the label of the most likely symbol. LLRs are the same
    /// as in bit-wise mode, so hard bits and LLR signs can rarely disagree.
    SymbolMap,
}

/// Per-symbol bit-level LLRs for a fixed constellation, prior and scale.
///
/// `L^l(y) = ln Σ_{x: bit l = 0} P(x) e^{-(y - δx)^2/2}
///         - ln Σ_{x: bit l = 1} P(x) e^{-(y - δx)^2/2}`,
/// unit noise variance, positive meaning bit 0. Level 0 is the sign bit.
#[derive(Debug, Clone)]
pub struct Demapper {
    m: usize,
    points: Vec<f64>,
    log_prior: Vec<f64>,
    /// `labels[j * m + l]`: bit `l` of the label of point `j`.
    labels: Vec<u8>,
    clip: f64,
    mode: DemapperMode,
}

impl Demapper {
    pub fn new(dist: &MbDistribution) -> Self {
        let m = dist.m() as usize;
        let delta = dist.delta();
        let mut points = Vec::new();
        let mut log_prior = Vec::new();
        let mut labels = Vec::new();
        for (&x, &p) in dist.symbols().iter().zip(dist.pmf()) {
            points.push(delta * x as f64);
            log_prior.push(p.ln());
            labels.extend(brgc_label(x, dist.m()).expect("alphabet symbol"));
        }
        Self {
            m,
            points,
            log_prior,
            labels,
            clip: DEFAULT_LLR_CLIP,
            mode: DemapperMode::BitWise,
        }
    }

    pub fn with_clip(mut self, clip: f64) -> Self {
        assert!(clip > 0.0, "clip must be positive");
        self.clip = clip;
        self
    }

    pub fn with_mode(mut self, mode: DemapperMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> DemapperMode {
        self.mode
    }

    /// Unclipped LLRs of one observation.
    pub fn llrs(&self, y: f64, out: &mut [f64]) {
        let mut metrics = [0f64; 1 << MAX_M];
        let metrics = self.metrics(y, &mut metrics);
        self.llrs_from_metrics(metrics, out);
    }

    /// Hard decision on one observation, bit `l` of the result being level
    /// `l`.
    pub fn hard_label(&self, y: f64) -> u32 {
        let m = self.m;
        let mut metrics = [0f64; 1 << MAX_M];
        let metrics = self.metrics(y, &mut metrics);
        let mut label = 0u32;
        match self.mode {
            DemapperMode::BitWise => {
                let mut llrs = [0f64; MAX_M];
                self.llrs_from_metrics(metrics, &mut llrs);
                for (l, &v) in llrs[..m].iter().enumerate() {
                    label |= ((v < 0.0) as u32) << l;
                }
            }
            DemapperMode::SymbolMap => {
                let best = argmax(metrics);
                for l in 0..m {
                    label |= (self.labels[best * m + l] as u32) << l;
                }
            }
        }
        label
    }

    /// Label bit `l` of constellation point `j` (ascending symbols).
    pub fn label_bit(&self, j: usize, l: usize) -> u8 {
        self.labels[j * self.m + l]
    }

    /// `ln P(x)` aligned with [`points`](Self::points).
    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// Scaled constellation points, ascending.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    fn metrics<'a>(&self, y: f64, buf: &'a mut [f64]) -> &'a [f64] {
        let out = &mut buf[..self.points.len()];
        for ((mt, &p), &lp) in out.iter_mut().zip(&self.points).zip(&self.log_prior) {
            *mt = lp - 0.5 * (y - p) * (y - p);
        }
        out
    }

    fn llrs_from_metrics(&self, metrics: &[f64], out: &mut [f64]) {
        let m = self.m;
        for (l, o) in out[..m].iter_mut().enumerate() {
            let (mut max0, mut max1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for (j, &mj) in metrics.iter().enumerate() {
                if self.labels[j * m + l] == 0 {
                    max0 = max0.max(mj);
                } else {
                    max1 = max1.max(mj);
                }
            }
            let (mut s0, mut s1) = (0.0, 0.0);
            for (j, &mj) in metrics.iter().enumerate() {
                // points with zero prior (underflow at large lambda) drop out
                if mj == f64::NEG_INFINITY {
                    continue;
                }
                if self.labels[j * m + l] == 0 {
                    s0 += (mj - max0).exp();
                } else {
                    s1 += (mj - max1).exp();
                }
            }
            *o = (max0 + s0.ln()) - (max1 + s1.ln());
        }
    }

    /// Demaps `y` into symbol-major hard bits and clipped LLRs
    /// (`m` entries per symbol, sign level first).
    pub fn demap(&self, y: &[f64]) -> (Vec<u8>, Vec<f64>) {
        let m = self.m;
        let mut bits = vec![0u8; y.len() * m];
        let mut llrs = vec![0f64; y.len() * m];
        let mut buf = [0f64; 1 << MAX_M];
        for (i, &yi) in y.iter().enumerate() {
            let metrics = self.metrics(yi, &mut buf);
            let l_out = &mut llrs[i * m..(i + 1) * m];
            self.llrs_from_metrics(metrics, l_out);
            for l in l_out.iter_mut() {
                // NaN only arises from non-finite input; map it to an erasure
                *l = if l.is_nan() { 0.0 } else { l.clamp(-self.clip, self.clip) };
            }
            let b_out = &mut bits[i * m..(i + 1) * m];
            match self.mode {
                DemapperMode::BitWise => {
                    for (b, &l) in b_out.iter_mut().zip(l_out.iter()) {
                        *b = (l < 0.0) as u8;
                    }
                }
                DemapperMode::SymbolMap => {
                    let best = argmax(metrics);
                    b_out.copy_from_slice(&self.labels[best * m..(best + 1) * m]);
                }
            }
        }
        (bits, llrs)
    }
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold(0, |best, (j, &x)| if x > v[best] { j } else { best })
}
