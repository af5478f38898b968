//! Product-code encoding and the two iterative decoders.

use proptest::prelude::*;
use shaped_pc::{BchCode, BitArray2D, DecoderConfig, LlrArray2D, ProductCode};

fn pc(v: u32, t: u32, s: u32) -> ProductCode {
    ProductCode::new(BchCode::new(v, t, s).unwrap())
}

fn random_bits(len: usize, seed: u64) -> Vec<u8> {
    let mut x = seed | 1;
    (0..len)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x & 1) as u8
        })
        .collect()
}

/// Checks every row and column with the component code directly.
fn all_lines_are_codewords(code: &ProductCode, a: &BitArray2D) -> bool {
    let c = code.component();
    (0..a.n()).all(|i| c.is_codeword(a.row(i)) && c.is_codeword(&a.column(i)))
}

fn llrs_from_bits(a: &BitArray2D, magnitude: f64) -> LlrArray2D {
    let v = a.as_slice().iter().map(|&b| if b == 0 { magnitude } else { -magnitude }).collect();
    LlrArray2D::from_vec(a.n(), v).unwrap()
}

#[test]
fn single_pivot_is_an_outer_product() {
    let code = pc(4, 1, 0);
    let k = code.component().k();
    let mut info = vec![0u8; k * k];
    info[0] = 1;
    let a = code.encode(&info).unwrap();
    let mut e0 = vec![0u8; k];
    e0[0] = 1;
    let g0 = code.component().encode(&e0).unwrap();
    for r in 0..15 {
        for c in 0..15 {
            assert_eq!(a.get(r, c), g0[r] & g0[c], "({r},{c})");
        }
    }
}

#[test]
fn large_array_is_valid_both_ways() {
    let code = pc(10, 3, 605);
    let k = code.component().k();
    let info = random_bits(k * k, 5);
    let a = code.encode(&info).unwrap();
    assert_eq!(a, code.encode_columns_first(&info).unwrap());
    assert!(all_lines_are_codewords(&code, &a));
    assert_eq!(code.info_block(&a), info);
}

#[test]
fn every_single_flip_is_corrected_within_one_iteration() {
    let code = pc(4, 1, 0);
    let info = random_bits(121, 9);
    let a = code.encode(&info).unwrap();
    let llr = llrs_from_bits(&a, 4.0);
    for r in 0..15 {
        for c in 0..15 {
            let mut rx = a.clone();
            rx.flip(r, c);
            let rep = code.decode_ibdd(&rx, &DecoderConfig::ibdd(4)).unwrap();
            assert!(rep.converged && rep.half_iterations <= 2);
            assert_eq!(rep.array, a);
            assert_eq!(rep.info, info);

            let mut weak = llr.clone();
            weak.set(r, c, -llr.get(r, c) * 0.25);
            let rep = code.decode_ibdd_cr(&weak, &DecoderConfig::ibdd_cr(vec![2.0; 8])).unwrap();
            assert!(rep.converged && rep.half_iterations <= 2);
            assert_eq!(rep.array, a);
        }
    }
}

/// Three positions whose weight-3 pattern the (15,7) t=2 code cannot decode.
fn failing_triple(code: &BchCode) -> [usize; 3] {
    for i in 0..15 {
        for j in i + 1..15 {
            for k in j + 1..15 {
                let mut w = vec![0u8; 15];
                w[i] = 1;
                w[j] = 1;
                w[k] = 1;
                if !code.bdd_decode(&w).unwrap().is_success() {
                    return [i, j, k];
                }
            }
        }
    }
    unreachable!("some weight-3 pattern is not decodable")
}

/// A 3x3 grid of errors on the all-zero array whose every touched line fails.
fn stall_pattern() -> (ProductCode, [usize; 3]) {
    let code = pc(4, 2, 0);
    let tri = failing_triple(code.component());
    (code, tri)
}

#[test]
fn minimal_stall_pattern_survives_ibdd() {
    let (code, tri) = stall_pattern();
    let mut rx = BitArray2D::zeros(15);
    for &r in &tri {
        for &c in &tri {
            rx.set(r, c, 1);
        }
    }
    let rep = code.decode_ibdd(&rx, &DecoderConfig::ibdd(10)).unwrap();
    assert!(!rep.converged);
    assert_eq!(rep.half_iterations, 20);
    assert_eq!(rep.array, rx);
}

#[test]
fn ibdd_cr_breaks_the_stall_with_reliabilities() {
    // hard decisions carry the 3x3 grid; the LLRs of the grid are weak
    // (+0.5, correct sign), everything else is strong (+10); weights 3
    let (code, tri) = stall_pattern();
    let mut hd = BitArray2D::zeros(15);
    let mut llr = vec![10.0; 225];
    for &r in &tri {
        for &c in &tri {
            hd.set(r, c, 1);
            llr[r * 15 + c] = 0.5;
        }
    }
    let llr = LlrArray2D::from_vec(15, llr).unwrap();
    let cfg = DecoderConfig::ibdd_cr(vec![3.0; 20]);
    let rep = code.decode_ibdd_cr_from(&hd, &llr, &cfg).unwrap();
    assert!(rep.converged);
    assert_eq!(rep.array, BitArray2D::zeros(15));
    // plain iBDD on the same hard decisions stays stuck
    assert!(!code.decode_ibdd(&hd, &DecoderConfig::ibdd(10)).unwrap().converged);
}

#[test]
fn failures_everywhere_pass_the_channel_signs_through() {
    // every row of the grid fails, so the messages are the LLR signs again
    let (code, tri) = stall_pattern();
    let mut llr = vec![6.0; 225];
    for &r in &tri {
        for &c in &tri {
            llr[r * 15 + c] = -1.0;
        }
    }
    let llr = LlrArray2D::from_vec(15, llr).unwrap();
    let rep = code.decode_ibdd_cr(&llr, &DecoderConfig::ibdd_cr(vec![2.0; 6])).unwrap();
    assert_eq!(rep.array, llr.hard_decisions());
    assert!(!rep.converged);
}

#[test]
fn strong_channel_overrides_any_verdict() {
    let code = pc(5, 2, 0);
    let k = code.component().k();
    let a = code.encode(&random_bits(k * k, 3)).unwrap();
    let llr = llrs_from_bits(&a, 5.0);
    let rep = code.decode_ibdd_cr(&llr, &DecoderConfig::ibdd_cr(vec![4.9; 4])).unwrap();
    assert_eq!(rep.array, a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encodings_commute_and_are_valid(
        (v, t, s) in prop_oneof![Just((4u32, 1u32, 0u32)), Just((5, 2, 3)), Just((6, 2, 1)), Just((7, 3, 20))],
        seed in any::<u64>(),
    ) {
        let code = pc(v, t, s);
        let k = code.component().k();
        let info = random_bits(k * k, seed);
        let a = code.encode(&info).unwrap();
        prop_assert_eq!(&a, &code.encode_columns_first(&info).unwrap());
        prop_assert!(all_lines_are_codewords(&code, &a));
        prop_assert!(code.is_codeword(&a));
    }

    #[test]
    fn converged_outputs_are_codewords_and_decoding_is_deterministic(
        seed in any::<u64>(),
        flips in proptest::collection::vec((0usize..31, 0usize..31), 0..40),
        strength in 0.5f64..6.0,
    ) {
        let code = pc(5, 2, 0);
        let a = code.encode(&random_bits(21 * 21, seed)).unwrap();
        let mut rx = a.clone();
        for &(r, c) in &flips {
            rx.flip(r, c);
        }
        let cfg = DecoderConfig::ibdd(6);
        let rep = code.decode_ibdd(&rx, &cfg).unwrap();
        prop_assert_eq!(&rep, &code.decode_ibdd(&rx, &cfg).unwrap());
        if rep.converged {
            prop_assert!(all_lines_are_codewords(&code, &rep.array));
        }
        let cr = DecoderConfig::ibdd_cr(vec![strength; 12]);
        let rep = code.decode_ibdd_cr(&llrs_from_bits(&rx, 1.0), &cr).unwrap();
        if rep.converged {
            prop_assert!(all_lines_are_codewords(&code, &rep.array));
        }
    }

    #[test]
    fn huge_weights_reproduce_ibdd_when_bdd_never_fails(
        seed in any::<u64>(),
        flips in proptest::collection::vec((0usize..31, 0usize..31), 0..3),
    ) {
        // at most t = 2 errors: no component ever fails
        let code = pc(5, 2, 0);
        let a = code.encode(&random_bits(21 * 21, seed)).unwrap();
        let mut rx = a.clone();
        for &(r, c) in &flips {
            rx.flip(r, c);
        }
        let ibdd = code.decode_ibdd(&rx, &DecoderConfig::ibdd(3)).unwrap();
        let cr = code
            .decode_ibdd_cr(&llrs_from_bits(&rx, 1.0), &DecoderConfig::ibdd_cr(vec![1e6; 6]))
            .unwrap();
        prop_assert_eq!(&ibdd.array, &cr.array);
        prop_assert_eq!(ibdd.half_iterations, cr.half_iterations);
        prop_assert_eq!(&ibdd.array, &a);
    }
}
