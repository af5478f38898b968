//! Seeded random interleaver for the information block.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A permutation `π` of `0..len` with its inverse.
///
/// `π` is a Fisher–Yates shuffle of the identity driven by
/// `ChaCha8Rng::seed_from_u64(seed)`: for `i = len-1, …, 1`, swap entries
/// `i` and `j`, `j` uniform in `0..=i`. Interleaving writes source bit `i`
/// to position `π[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverMap {
    seed: u64,
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl InterleaverMap {
    pub fn new(len: usize, seed: u64) -> Self {
        assert!(len <= u32::MAX as usize, "interleaver too long");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut forward: Vec<u32> = (0..len as u32).collect();
        for i in (1..len).rev() {
            let j = rng.random_range(0..=i);
            forward.swap(i, j);
        }
        let mut inverse = vec![0u32; len];
        for (i, &p) in forward.iter().enumerate() {
            inverse[p as usize] = i as u32;
        }
        Self {
            seed,
            forward,
            inverse,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Destination of source index `i`.
    #[inline]
    pub fn forward(&self, i: usize) -> usize {
        self.forward[i] as usize
    }

    /// Source index landing at position `p`.
    #[inline]
    pub fn inverse(&self, p: usize) -> usize {
        self.inverse[p] as usize
    }

    /// `out[π(i)] = src[i]`.
    pub fn interleave<T: Copy + Default>(&self, src: &[T]) -> Vec<T> {
        assert_eq!(src.len(), self.len());
        let mut out = vec![T::default(); src.len()];
        for (i, &x) in src.iter().enumerate() {
            out[self.forward[i] as usize] = x;
        }
        out
    }

    /// `out[i] = dst[π(i)]`.
    pub fn deinterleave<T: Copy>(&self, dst: &[T]) -> Vec<T> {
        assert_eq!(dst.len(), self.len());
        self.forward.iter().map(|&p| dst[p as usize]).collect()
    }
}
