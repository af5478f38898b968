//! Shortened binary BCH component codes.
//!
//! A code is specified by `(v, t, s)`: the parent narrow-sense primitive BCH
//! code of length `2^v - 1` correcting `t` errors, shortened by removing its `s`
//! leading information positions. The shortened code has
//!
//! ```text
//! n_c = 2^v - 1 - s,    k_c = 2^v - v*t - 1 - s.
//! ```
//!
//! Bit `j` of a codeword is the coefficient of `x^(n_c - 1 - j)`, so indices
//! `0..k_c` carry the systematic information bits and `k_c..n_c` the parity.
//! Shortened positions are the (implicitly zero) degrees `n_c..2^v - 1`.

use std::sync::Arc;

use crate::error::BchError;
use crate::gf::GfField;

/// Result of bounded-distance decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BddOutcome {
    /// A codeword within distance `t` was found. `flips` is its distance to
    /// the input.
    Success { word: Vec<u8>, flips: usize },
    Failure,
}

impl BddOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, BddOutcome::Success { .. })
    }

    pub fn flips(&self) -> usize {
        match self {
            BddOutcome::Success { flips, .. } => *flips,
            BddOutcome::Failure => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BchCode {
    field: Arc<GfField>,
    t: u32,
    s: u32,
    n: usize,
    k: usize,
    /// Generator polynomial, bit `j` of word `j / 64` = coefficient of `x^j`.
    generator: Vec<u64>,
    /// Number of parity bits, `deg g`.
    redundancy: usize,
}

/// Largest admissible shortening for `(v, t)`, i.e. the one leaving `k_c = 1`.
pub fn max_shortening(v: u32, t: u32) -> i64 {
    (1i64 << v) - (v as i64) * (t as i64) - 2
}

impl BchCode {
    /// Builds the `(v, t, s)` shortened BCH code.
    ///
    /// The generator is the product of the distinct minimal polynomials of
    /// `α, α^2, ..., α^{2t}`. Construction fails if its degree is not exactly
    /// `v*t`, since the code dimension would then disagree with `k_c` above.
    pub fn new(v: u32, t: u32, s: u32) -> Result<Self, BchError> {
        let field = GfField::new(v)?;
        if t == 0 {
            return Err(BchError::Capability(t));
        }
        let max = max_shortening(v, t);
        if (s as i64) > max || max < 0 {
            return Err(BchError::Shortening { v, t, s, max });
        }
        let order = field.order() as u64;
        let mut covered = vec![false; order as usize];
        let mut generator = vec![1u64];
        for i in 1..=(2 * t as u64) {
            let i = i % order;
            if covered[i as usize] {
                continue;
            }
            for c in field.cyclotomic_coset(i) {
                covered[c as usize] = true;
            }
            generator = clmul(&generator, &[field.minimal_polynomial(i)]);
        }
        let degree = poly_degree(&generator);
        let expected = v * t;
        if degree != expected as usize {
            return Err(BchError::DegreeMismatch {
                expected,
                actual: degree as u32,
            });
        }
        let n = order as usize - s as usize;
        Ok(Self {
            field: Arc::new(field),
            t,
            s,
            n,
            k: n - degree,
            generator,
            redundancy: degree,
        })
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    pub fn v(&self) -> u32 {
        self.field.degree()
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Code length `n_c`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Code dimension `k_c`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn redundancy(&self) -> usize {
        self.redundancy
    }

    /// Coefficients of the generator polynomial, lowest degree first.
    pub fn generator_coefficients(&self) -> Vec<u8> {
        (0..=self.redundancy)
            .map(|j| ((self.generator[j / 64] >> (j % 64)) & 1) as u8)
            .collect()
    }

    /// Systematic encoding: `info` followed by the remainder of
    /// `u(x) x^(n_c - k_c)` modulo the generator.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, BchError> {
        check_len(self.k, info.len())?;
        let mut word = vec![0u8; self.n];
        word[..self.k].copy_from_slice(info);
        self.encode_in_place(&mut word);
        Ok(word)
    }

    /// Overwrites `word[k_c..]` with the parity of `word[..k_c]`.
    pub(crate) fn encode_in_place(&self, word: &mut [u8]) {
        debug_assert_eq!(word.len(), self.n);
        let r = self.redundancy;
        let words = r.div_ceil(64).max(1);
        let mut reg = vec![0u64; words];
        let top_word = (r - 1) / 64;
        let top_bit = (r - 1) % 64;
        let top_mask = if r.is_multiple_of(64) { u64::MAX } else { (1u64 << (r % 64)) - 1 };
        for &bit in &word[..self.k] {
            let feedback = (bit & 1) ^ ((reg[top_word] >> top_bit) as u8 & 1);
            // shift the register up by one degree
            let mut carry = 0u64;
            for w in reg.iter_mut() {
                let next = *w >> 63;
                *w = (*w << 1) | carry;
                carry = next;
            }
            reg[top_word] &= top_mask;
            if feedback == 1 {
                for (w, g) in reg.iter_mut().zip(&self.generator) {
                    *w ^= g;
                }
                // the x^r term of g is not part of the register
                reg[top_word] &= top_mask;
            }
        }
        for q in 0..r {
            let deg = r - 1 - q;
            word[self.k + q] = ((reg[deg / 64] >> (deg % 64)) & 1) as u8;
        }
    }

    /// Syndromes `S_1 .. S_2t` of a received word.
    pub fn syndromes(&self, word: &[u8]) -> Vec<u32> {
        let two_t = 2 * self.t as usize;
        let mut syn = vec![0u32; two_t];
        let order = self.field.order();
        for (idx, &b) in word.iter().enumerate() {
            if b & 1 == 0 {
                continue;
            }
            let d = (self.n - 1 - idx) as u32;
            let step = (2 * d as u64 % order as u64) as u32;
            let mut e = d % order;
            // odd syndromes only; even ones follow from S_2j = S_j^2
            for j in (0..two_t).step_by(2) {
                syn[j] ^= self.field.exp(e as u64);
                e += step;
                if e >= order {
                    e -= order;
                }
            }
        }
        for j in (1..two_t).step_by(2) {
            // S_{j+1} with j+1 even equals S_{(j+1)/2}^2
            let half = j.div_ceil(2) - 1;
            syn[j] = self.field.square(syn[half]);
        }
        syn
    }

    /// True when every syndrome vanishes.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndromes(word).iter().all(|&s| s == 0)
    }

    /// Bounded-distance decoding with Berlekamp–Massey and a Chien search
    /// over the unshortened positions.
    pub fn bdd_decode(&self, word: &[u8]) -> Result<BddOutcome, BchError> {
        check_len(self.n, word.len())?;
        let mut out = word.to_vec();
        Ok(match self.correct_in_place(&mut out) {
            Some(flips) => BddOutcome::Success { word: out, flips },
            None => BddOutcome::Failure,
        })
    }

    /// Corrects `word` in place. Returns the number of flipped bits, or `None`
    /// on decoding failure, in which case `word` is left untouched.
    pub fn correct_in_place(&self, word: &mut [u8]) -> Option<usize> {
        debug_assert_eq!(word.len(), self.n);
        let syn = self.syndromes(word);
        if syn.iter().all(|&s| s == 0) {
            return Some(0);
        }
        let locator = self.berlekamp_massey(&syn)?;
        let positions = self.chien_search(&locator)?;
        for &p in &positions {
            word[p] ^= 1;
        }
        Some(positions.len())
    }

    /// Error-locator polynomial `Λ(x)`, lowest degree first. `None` when its
    /// degree exceeds `t`.
    fn berlekamp_massey(&self, syn: &[u32]) -> Option<Vec<u32>> {
        let f = &*self.field;
        let two_t = syn.len();
        let mut c = vec![0u32; two_t + 1];
        let mut b = vec![0u32; two_t + 1];
        c[0] = 1;
        b[0] = 1;
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut last = 1u32;
        for n in 0..two_t {
            let mut d = syn[n];
            for i in 1..=l {
                d ^= f.mul(c[i], syn[n - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, last).expect("nonzero discrepancy base");
            if 2 * l <= n {
                let prev = c.clone();
                for i in 0..(two_t + 1).saturating_sub(shift) {
                    c[i + shift] ^= f.mul(coef, b[i]);
                }
                l = n + 1 - l;
                b = prev;
                last = d;
                shift = 1;
            } else {
                for i in 0..(two_t + 1).saturating_sub(shift) {
                    c[i + shift] ^= f.mul(coef, b[i]);
                }
                shift += 1;
            }
        }
        if l > self.t as usize {
            return None;
        }
        // a locator whose true degree is below L cannot have L roots
        if c[l] == 0 || c[l + 1..].iter().any(|&x| x != 0) {
            return None;
        }
        c.truncate(l + 1);
        Some(c)
    }

    /// Word indices of the roots of `Λ`. `None` unless exactly `deg Λ`
    /// distinct roots lie at unshortened positions.
    fn chien_search(&self, locator: &[u32]) -> Option<Vec<usize>> {
        let f = &*self.field;
        let order = f.order() as u64;
        let deg = locator.len() - 1;
        // error at degree d  <=>  Λ(α^{-d}) = 0
        // terms[i] tracks Λ_i α^{-i d} as a log (or None for a zero coefficient)
        let mut terms: Vec<Option<u64>> = locator
            .iter()
            .map(|&c| (c != 0).then(|| f.log(c) as u64))
            .collect();
        let steps: Vec<u64> = (0..=deg as u64).map(|i| (order - i % order) % order).collect();
        let mut positions = Vec::with_capacity(deg);
        for d in 0..self.n {
            let mut sum = 0u32;
            for t in terms.iter().flatten() {
                sum ^= f.exp(*t);
            }
            if sum == 0 {
                positions.push(self.n - 1 - d);
                if positions.len() == deg {
                    return Some(positions);
                }
            }
            for (t, &st) in terms.iter_mut().zip(&steps) {
                if let Some(e) = t {
                    *e = (*e + st) % order;
                }
            }
        }
        None
    }
}

fn check_len(expected: usize, actual: usize) -> Result<(), BchError> {
    if expected == actual {
        Ok(())
    } else {
        Err(BchError::Length { expected, actual })
    }
}

/// Carry-less product of two GF(2) polynomials stored as bit vectors.
fn clmul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let da = poly_degree(a);
    let db = poly_degree(b);
    let mut out = vec![0u64; (da + db) / 64 + 1];
    for i in 0..=da {
        if (a[i / 64] >> (i % 64)) & 1 == 0 {
            continue;
        }
        for j in 0..=db {
            if (b[j / 64] >> (j % 64)) & 1 == 1 {
                let k = i + j;
                out[k / 64] ^= 1 << (k % 64);
            }
        }
    }
    out
}

fn poly_degree(p: &[u64]) -> usize {
    for (w, &x) in p.iter().enumerate().rev() {
        if x != 0 {
            return w * 64 + 63 - x.leading_zeros() as usize;
        }
    }
    0
}
