//! AWGN channel, Monte Carlo runs, operating-point search and iBDD-CR weight
//! calibration.

pub mod channel;
pub mod config;
pub mod montecarlo;
pub mod stats;

pub use channel::awgn_transmit;
pub use config::{OutputPaths, SimConfig, SnrBracket, StopRule};
pub use montecarlo::{
    calibrate_weights, find_operating_point, find_operating_point_with_workers, frame_bits, run_montecarlo,
    run_montecarlo_with_workers, workers_from_env, OperatingPoint, SimResult, SnrResult, WeightCalibration,
    BATCH_FRAMES, CONFIDENCE, OPERATING_POINT_RESOLUTION_DB, WORKERS_ENV,
};
pub use stats::{clopper_pearson, frame_seed, noise_seed, splitmix64};
