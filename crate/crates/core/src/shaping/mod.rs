//! Amplitude shaping: Maxwell–Boltzmann distributions, constant composition
//! distribution matching and Gray labelling.

pub mod ccdm;
pub mod gray;
mod limbs;
pub mod mb;

pub use ccdm::{ccdm_rate, multinomial, AmplitudeComposition, CcdmCodec};
pub use gray::{brgc_amplitude_bits, brgc_label};
pub use mb::{entropy_bits, lambda_for_amplitude_entropy, MbDistribution};
