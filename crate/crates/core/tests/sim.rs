//! Channel statistics and end-to-end Monte Carlo behaviour.

use shaped_pc::sim::{
    awgn_transmit, clopper_pearson, find_operating_point_with_workers, run_montecarlo_with_workers, SimConfig,
};

fn bpsk_hamming(extra: &str) -> SimConfig {
    let text = format!(
        r#"{{"v":4,"t":1,"s":0,"m":1,"decoder":{{"mode":"ibdd","max_iterations":8}},"lambda":0.0,"seed":3{extra}}}"#
    );
    SimConfig::from_json(&text).unwrap()
}

#[test]
fn noise_has_unit_variance() {
    let n = 1_000_000;
    let y = awgn_transmit(&vec![0.0; n], 99);
    let mean = y.iter().sum::<f64>() / n as f64;
    let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    assert!(mean.abs() < 0.005, "mean {mean}");
    assert!((var - 1.0).abs() < 0.01, "variance {var}");
    // offsets pass through unchanged in expectation
    let shifted = awgn_transmit(&vec![2.5; n], 99);
    let diff: f64 = shifted.iter().zip(&y).map(|(a, b)| a - b - 2.5).map(f64::abs).fold(0.0, f64::max);
    assert!(diff < 1e-12);
    assert!(awgn_transmit(&[], 5).is_empty());
}

#[test]
fn hamming_product_code_over_bpsk_clears_one_percent() {
    let cfg = bpsk_hamming(r#","snr_db":[6.5],"stop":{"min_block_errors":100,"max_frames":200000}"#);
    let r = run_montecarlo_with_workers(&cfg, 0).unwrap();
    let p = &r.points[0];
    assert!(p.block_errors >= 100, "{p:?}");
    assert!(p.pe_high < 1e-2, "{p:?}");
    assert_eq!((p.pe_low, p.pe_high), clopper_pearson(p.block_errors, p.frames, 0.95));
    assert!(p.ber() <= p.pe);
    assert!(p.pre_fec_ber() > p.ber());
}

#[test]
fn block_error_rate_falls_with_snr() {
    let cfg = bpsk_hamming(r#","snr_db":[4.0,5.0,6.0],"stop":{"min_block_errors":100,"max_frames":50000}"#);
    let r = run_montecarlo_with_workers(&cfg, 0).unwrap();
    for w in r.points.windows(2) {
        // non-increasing up to statistical slack
        assert!(w[1].pe_low <= w[0].pe_high, "{} dB vs {} dB", w[0].snr_db, w[1].snr_db);
        assert!(w[1].pe < w[0].pe);
    }
}

#[test]
fn operating_point_moves_up_with_stricter_targets() {
    let search = r#","search":{"lo_db":3.0,"hi_db":9.0},"stop":{"min_block_errors":50,"max_frames":20000}"#;
    let loose = bpsk_hamming(&format!(r#"{search},"target_pe":0.1"#));
    let strict = bpsk_hamming(&format!(r#"{search},"target_pe":0.01"#));
    let a = find_operating_point_with_workers(&loose, 0).unwrap();
    let b = find_operating_point_with_workers(&strict, 0).unwrap();
    assert!(a.snr_op_db < b.snr_op_db, "{} vs {}", a.snr_op_db, b.snr_op_db);
    assert!(a.at_op.pe_high <= 0.1 && b.at_op.pe_high <= 0.01);
    for op in [&a, &b] {
        if let Some(c) = op.crossing_db {
            assert!(op.snr_op_db >= c);
            assert_eq!(op.backoff_db, Some(op.snr_op_db - c));
        }
    }
}

#[test]
fn shaped_operating_point_sits_above_the_crossing() {
    // 4-ASK over the shortened (62,56) Hamming code crosses the rate curve
    // near 10 dB
    let cfg = SimConfig::from_json(
        r#"{"v":6,"t":1,"s":1,"m":2,"decoder":{"mode":"ibdd","max_iterations":8},"seed":5,
            "search":{"lo_db":8.0,"hi_db":14.0},"target_pe":0.1,
            "stop":{"min_block_errors":30,"max_frames":3000}}"#,
    )
    .unwrap();
    let op = find_operating_point_with_workers(&cfg, 0).unwrap();
    let c = op.crossing_db.expect("crossing inside the bracket");
    assert!(op.snr_op_db >= c, "{} < {c}", op.snr_op_db);
    assert!(op.backoff_db.unwrap() >= 0.0);
}

#[test]
fn unreachable_target_is_a_budget_error() {
    let cfg = bpsk_hamming(r#","search":{"lo_db":0.0,"hi_db":2.0},"target_pe":0.001,"stop":{"min_block_errors":20,"max_frames":2000}"#);
    assert!(find_operating_point_with_workers(&cfg, 0).is_err());
}
