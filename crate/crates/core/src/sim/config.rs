//! Experiment configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::SimError;
use crate::pipeline::demap::DemapperMode;
use crate::product::DecoderConfig;

/// Stop a point at `min_block_errors` block errors or `max_frames` frames,
/// whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    pub min_block_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_block_errors: 100,
            max_frames: 100_000,
        }
    }
}

/// SNR interval for operating-point searches, dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrBracket {
    pub lo_db: f64,
    pub hi_db: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

fn default_target_pe() -> f64 {
    1e-3
}

/// A Monte Carlo experiment. Unknown keys are rejected when parsing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub v: u32,
    pub t: u32,
    pub s: u32,
    pub m: u32,
    pub decoder: DecoderConfig,
    #[serde(default)]
    pub demapper: DemapperMode,
    /// Fixed shaping parameter; absent means the rate-optimal `λ*` at every
    /// SNR.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// SNR points for [`run_montecarlo`](super::run_montecarlo), dB.
    #[serde(default)]
    pub snr_db: Vec<f64>,
    /// Bracket for [`find_operating_point`](super::find_operating_point).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SnrBracket>,
    #[serde(default = "default_target_pe")]
    pub target_pe: f64,
    #[serde(default)]
    pub stop: StopRule,
    /// Master seed for information bits and noise.
    pub seed: u64,
    #[serde(default)]
    pub interleaver_seed: u64,
    /// Debugging aid: skip the channel noise.
    #[serde(default)]
    pub noiseless: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: &str| Err(SimError::Config(msg.to_string()));
        if !(self.target_pe > 0.0 && self.target_pe < 1.0) {
            return bad("target_pe must lie in (0, 1)");
        }
        if self.stop.min_block_errors < 1 {
            return bad("stop.min_block_errors must be at least 1");
        }
        if self.stop.max_frames < 1 {
            return bad("stop.max_frames must be at least 1");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr_db entries must be finite");
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l >= 0.0) {
                return bad("lambda must be finite and non-negative");
            }
        }
        if let Some(b) = self.search {
            if !(b.lo_db.is_finite() && b.hi_db.is_finite() && b.lo_db < b.hi_db) {
                return bad("search bracket must satisfy lo_db < hi_db");
            }
        }
        self.decoder.validate()?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON of everything that affects results
    /// (output paths excluded), hex.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output = OutputPaths::default();
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"v":6,"t":2,"s":1,"m":2,
        "decoder":{"mode":"ibdd","max_iterations":4},"snr_db":[10.0],"seed":1}"#;

    #[test]
    fn defaults_apply() {
        let c = SimConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.target_pe, 1e-3);
        assert_eq!(c.stop, StopRule::default());
        assert_eq!(c.demapper, DemapperMode::BitWise);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = MINIMAL.replace("\"seed\":1", "\"seed\":1,\"sead\":2");
        assert!(SimConfig::from_json(&text).is_err());
        let text = MINIMAL.replace("\"max_iterations\":4", "\"max_iterations\":4,\"x\":0");
        assert!(SimConfig::from_json(&text).is_err());
    }

    #[test]
    fn digest_ignores_outputs_only() {
        let a = SimConfig::from_json(MINIMAL).unwrap();
        let mut b = a.clone();
        b.output.json = Some("x.json".into());
        assert_eq!(a.digest(), b.digest());
        b.seed = 2;
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn invalid_values_rejected() {
        let text = MINIMAL.replace("\"seed\":1", "\"seed\":1,\"target_pe\":1.5");
        assert!(SimConfig::from_json(&text).is_err());
    }
}
