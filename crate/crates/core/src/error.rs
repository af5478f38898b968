use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BchError {
    #[error("unsupported field degree v={0} (supported: 2..=16)")]
    FieldDegree(u32),
    #[error("error-correcting capability t={0} must be at least 1")]
    Capability(u32),
    #[error("shortening s={s} out of range for v={v}, t={t} (max {max})")]
    Shortening { v: u32, t: u32, s: u32, max: i64 },
    #[error("generator degree {actual} differs from v*t = {expected}")]
    DegreeMismatch { expected: u32, actual: u32 },
    #[error("expected {expected} bits, got {actual}")]
    Length { expected: usize, actual: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error(transparent)]
    Bch(#[from] BchError),
    #[error("array dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    Dimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("decoder mode {0} does not match the requested decoder")]
    Mode(&'static str),
    #[error("iBDD-CR needs {expected} weights, got {actual}")]
    Weights { expected: usize, actual: usize },
    #[error("weights must be positive and finite")]
    WeightValue,
    #[error("max_iterations must be positive")]
    Iterations,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapingError {
    #[error("shaping parameter lambda={0} must be finite and non-negative")]
    Lambda(f64),
    #[error("bits per symbol m={0} out of range (1..=8)")]
    BitsPerSymbol(u32),
    #[error("symbol {symbol} is not in the 2^{m}-ASK alphabet")]
    Alphabet { symbol: i32, m: u32 },
    #[error("expected {expected} input bits, got {actual}")]
    Length { expected: usize, actual: usize },
    #[error("sequence does not have the codec composition")]
    CompositionMismatch,
    #[error("sequence rank lies outside the matcher image")]
    OutsideImage,
    #[error("composition must have at least one amplitude and a positive length")]
    EmptyComposition,
    #[error("entropy target {0} is outside the reachable range")]
    EntropyTarget(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PasError {
    #[error(transparent)]
    Bch(#[from] BchError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Shaping(#[from] ShapingError),
    #[error("infeasible parameters (v={v}, t={t}, s={s}, m={m}): {reason}")]
    Infeasible {
        v: u32,
        t: u32,
        s: u32,
        m: u32,
        reason: Infeasibility,
    },
    #[error("{what}: expected length {expected}, got {actual}")]
    Length {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("distribution uses m={dist} but the frame uses m={frame}")]
    BitsPerSymbol { dist: u32, frame: u32 },
    #[error("malformed frame record: {0}")]
    Record(String),
}

/// Which feasibility condition a parameter set violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// `n_c^2 / m` is not an integer.
    FractionalBlockLength,
    /// `k_c^2 - (m-1) n < 0`, i.e. the rate is below `(m-1)/m`.
    NegativeUniformBits,
    /// `gamma >= 1`.
    GammaTooLarge,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Infeasibility::FractionalBlockLength => {
                write!(f, "n = n_c^2/m is not a positive integer")
            }
            Infeasibility::NegativeUniformBits => write!(f, "gamma*n is negative"),
            Infeasibility::GammaTooLarge => write!(f, "gamma is not below 1"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Shaping(#[from] ShapingError),
    #[error(transparent)]
    Pas(#[from] PasError),
    #[error("the SE curve stays below the shaped rate curve over {lo_db}..{hi_db} dB")]
    NoCrossing { lo_db: f64, hi_db: f64 },
    #[error("the SE curve stays above the shaped rate curve over {lo_db}..{hi_db} dB")]
    NeverFeasible { lo_db: f64, hi_db: f64 },
    #[error("invalid SNR range {lo_db}..{hi_db} dB")]
    Range { lo_db: f64, hi_db: f64 },
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Pas(#[from] PasError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Shaping(#[from] ShapingError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("stop rule cannot resolve target P_e={target} at {snr_db} dB (upper bound {upper})")]
    Budget { target: f64, snr_db: f64, upper: f64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
