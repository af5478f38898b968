//! Seed derivation and binomial confidence intervals.

use statrs::function::beta::inv_beta_reg;

/// SplitMix64 finalizer; a bijection on `u64` with good avalanche.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of frame `index` under `master`: `splitmix64(master + index)`.
/// Frames at different SNRs share seeds, so SNR points see the same
/// information bits and noise shapes.
pub fn frame_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index))
}

/// Noise seed of a frame, decorrelated from the seed of its information
/// bits.
pub fn noise_seed(frame_seed: u64) -> u64 {
    splitmix64(frame_seed ^ 0x6E6F_6973_6521_0001)
}

/// Two-sided Clopper–Pearson interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - confidence;
    let (k, n) = (k as f64, n as f64);
    let lo = if k == 0.0 {
        0.0
    } else {
        inv_beta_reg(k, n - k + 1.0, alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        inv_beta_reg(k + 1.0, n - k, 1.0 - alpha / 2.0)
    };
    (lo, hi)
}
