//! Full-scale operating points for the (1023, 993) BCH family with 16-ASK.
//!
//! These take days on a workstation and are ignored by default:
//!
//! ```text
//! cargo test --release -p shaped-pc-cli --test long_run -- --ignored --nocapture
//! ```
//!
//! Each test prints what it measured next to the value it is meant to be
//! compared with. `SHAPED_PC_WORKERS` sets the thread count.

use shaped_pc::sim::{find_operating_point, OperatingPoint, SimConfig};
use shaped_pc::DecoderConfig;

fn operating_point(s: u32, decoder: DecoderConfig, lambda: Option<f64>, lo: f64, hi: f64) -> OperatingPoint {
    let decoder = serde_json::to_string(&decoder).unwrap();
    let lambda = lambda.map_or(String::new(), |l| format!(r#","lambda":{l}"#));
    let cfg = SimConfig::from_json(&format!(
        r#"{{"v":10,"t":3,"s":{s},"m":4,"decoder":{decoder}{lambda},
            "search":{{"lo_db":{lo},"hi_db":{hi}}},"target_pe":0.001,
            "stop":{{"min_block_errors":100,"max_frames":1000000}},"seed":2024}}"#
    ))
    .unwrap();
    find_operating_point(&cfg).unwrap()
}

#[test]
#[ignore = "days of compute"]
fn backoff_from_the_crossing_at_s77() {
    let op = operating_point(77, DecoderConfig::ibdd(8), None, 23.0, 28.0);
    println!(
        "s=77 iBDD: P_e 1e-3 at {:.2} dB, crossing {:?} dB, back-off {:?} dB (reference 1.59 dB)",
        op.snr_op_db, op.crossing_db, op.backoff_db
    );
    println!("{}", serde_json::to_string_pretty(&op).unwrap());
}

#[test]
#[ignore = "days of compute"]
fn combined_reliability_gain() {
    for (s, lo, hi) in [(77, 23.0, 28.0), (261, 22.0, 27.0), (447, 19.0, 25.0), (535, 17.0, 24.0), (605, 16.0, 23.0)] {
        let plain = operating_point(s, DecoderConfig::ibdd(8), None, lo, hi);
        let cr = operating_point(s, DecoderConfig::ibdd_cr_default(8), None, lo, hi);
        println!(
            "s={s}: iBDD {:.2} dB, iBDD-CR {:.2} dB, gain {:.2} dB (reference up to 0.3 dB)",
            plain.snr_op_db,
            cr.snr_op_db,
            plain.snr_op_db - cr.snr_op_db
        );
    }
}

#[test]
#[ignore = "days of compute"]
fn shaped_against_uniform_signaling() {
    // gains are read off the SE-SNR plane (reference up to 2.7 dB and 1 bpcu)
    for (s, lo, hi) in [(77, 23.0, 30.0), (447, 19.0, 28.0), (605, 16.0, 27.0), (727, 14.0, 26.0), (797, 12.0, 25.0)] {
        let shaped = operating_point(s, DecoderConfig::ibdd(8), None, lo, hi);
        let uniform = operating_point(s, DecoderConfig::ibdd(8), Some(0.0), lo, hi);
        println!(
            "s={s}: shaped {:.4} bpcu at {:.2} dB, uniform {:.4} bpcu at {:.2} dB",
            shaped.se, shaped.snr_op_db, uniform.se, uniform.snr_op_db
        );
    }
}
