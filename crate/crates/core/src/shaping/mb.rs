//! Maxwell–Boltzmann input distributions on `2^m`-ASK.

use crate::error::ShapingError;

pub const MAX_BITS_PER_SYMBOL: u32 = 8;

/// `P(x) ∝ exp(-λ x^2)` on `X = {±1, ±3, …, ±(2^m - 1)}`, with the
/// transmitter scale `delta` applied to every symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct MbDistribution {
    m: u32,
    lambda: f64,
    /// Symbols in increasing order.
    symbols: Vec<i32>,
    pmf: Vec<f64>,
    delta: f64,
}

impl MbDistribution {
    /// Unscaled distribution (`delta = 1`).
    pub fn new(lambda: f64, m: u32) -> Result<Self, ShapingError> {
        if !(1..=MAX_BITS_PER_SYMBOL).contains(&m) {
            return Err(ShapingError::BitsPerSymbol(m));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(ShapingError::Lambda(lambda));
        }
        let amax = (1i32 << m) - 1;
        let symbols: Vec<i32> = (-amax..=amax).step_by(2).collect();
        // weights relative to x^2 = 1 so large lambda does not underflow to 0/0
        let weights: Vec<f64> = symbols
            .iter()
            .map(|&x| (-lambda * ((x * x) as f64 - 1.0)).exp())
            .collect();
        let z: f64 = weights.iter().sum();
        let pmf = weights.into_iter().map(|w| w / z).collect();
        Ok(Self {
            m,
            lambda,
            symbols,
            pmf,
            delta: 1.0,
        })
    }

    pub fn uniform(m: u32) -> Result<Self, ShapingError> {
        Self::new(0.0, m)
    }

    /// Copy with `delta` chosen so that `E[(delta X)^2]` equals the SNR (unit
    /// noise variance).
    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        let snr = 10f64.powf(snr_db / 10.0);
        let mut d = self.clone();
        d.delta = (snr / self.energy()).sqrt();
        d
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        let mut d = self.clone();
        d.delta = delta;
        d
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Symbols of the alphabet, ascending.
    pub fn symbols(&self) -> &[i32] {
        &self.symbols
    }

    /// Probabilities aligned with [`symbols`](Self::symbols).
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn prob(&self, x: i32) -> Option<f64> {
        self.symbols
            .iter()
            .position(|&s| s == x)
            .map(|i| self.pmf[i])
    }

    /// Number of amplitudes, `2^(m-1)`.
    pub fn num_amplitudes(&self) -> usize {
        1 << (self.m - 1)
    }

    /// Amplitudes `1, 3, …, 2^m - 1`.
    pub fn amplitudes(&self) -> Vec<i32> {
        (0..self.num_amplitudes() as i32).map(|i| 2 * i + 1).collect()
    }

    /// `P_A(a) = 2 P_X(a)` over ascending amplitudes.
    pub fn amplitude_pmf(&self) -> Vec<f64> {
        let half = self.num_amplitudes();
        self.pmf[half..].iter().map(|p| 2.0 * p).collect()
    }

    /// Unscaled second moment `E[X^2]`.
    pub fn energy(&self) -> f64 {
        self.symbols
            .iter()
            .zip(&self.pmf)
            .map(|(&x, p)| p * (x * x) as f64)
            .sum()
    }

    /// SNR (linear) delivered by the current `delta`.
    pub fn snr(&self) -> f64 {
        self.delta * self.delta * self.energy()
    }

    /// `H(X)` in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.pmf)
    }

    /// `H(A)` in bits; equals `H(X) - 1`.
    pub fn amplitude_entropy(&self) -> f64 {
        entropy_bits(&self.amplitude_pmf())
    }
}

pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| -q * q.log2())
        .sum()
}

/// Shaping parameter whose amplitude entropy equals `target` bits, found by
/// bisection (`H(A)` decreases in `λ`).
pub fn lambda_for_amplitude_entropy(m: u32, target: f64) -> Result<f64, ShapingError> {
    let hmax = (m - 1) as f64;
    if !(target > 0.0 && target <= hmax) {
        return Err(ShapingError::EntropyTarget(target));
    }
    let h = |l: f64| MbDistribution::new(l, m).map(|d| d.amplitude_entropy());
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while h(hi)? > target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(ShapingError::EntropyTarget(target));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
