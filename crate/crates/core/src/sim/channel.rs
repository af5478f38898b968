//! Real AWGN channel with unit noise variance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `y_i = x_i + z_i`, `z_i` i.i.d. standard normal drawn in order from
/// `ChaCha8Rng::seed_from_u64(noise_seed)` by the ziggurat sampler of
/// `rand_distr::StandardNormal`. The SNR lives in the transmit scale.
pub fn awgn_transmit(x: &[f64], noise_seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
    x.iter()
        .map(|&xi| xi + rng.sample::<f64, _>(StandardNormal))
        .collect()
}
