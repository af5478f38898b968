//! Probabilistic amplitude shaping with product codes under hard-decision
//! decoding.
//!
//! The crate covers the whole chain for one product-code array per ASK
//! stream:
//!
//! - [`gf`], [`bch`]: GF(2^v) arithmetic and shortened BCH component codes
//!   with bounded-distance decoding.
//! - [`product`]: product-code encoding, iBDD and iBDD with combined
//!   reliability (iBDD-CR).
//! - [`shaping`]: Maxwell–Boltzmann PMFs, constant composition distribution
//!   matching, Gray labels.
//! - [`pipeline`]: frame parameters and feasibility, interleaving, bit
//!   placement, demapping and the end-to-end encoder/decoder.
//! - [`analysis`]: hard-decision achievable rates, shaping optimization,
//!   spectral efficiency and crossing points.
//! - [`sim`]: AWGN channel, Monte Carlo runs and operating-point search.

pub mod analysis;
pub mod bch;
pub mod error;
pub mod gf;
pub mod pipeline;
pub mod product;
pub mod shaping;
pub mod sim;

pub use bch::{BchCode, BddOutcome};
pub use error::{AnalysisError, BchError, CodeError, PasError, ShapingError, SimError};
pub use product::{BitArray2D, DecodeReport, DecoderConfig, DecoderMode, LlrArray2D, ProductCode};
pub use shaping::{AmplitudeComposition, CcdmCodec, MbDistribution};
