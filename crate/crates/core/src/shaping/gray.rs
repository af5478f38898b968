//! Binary reflected Gray code labels for `2^m`-ASK.
//!
//! A label is `[sign | amplitude bits]`: the first bit is 0 for positive
//! symbols, the remaining `m - 1` bits are the BRGC of the amplitude index in
//! increasing amplitude order, most significant bit first. For 8-ASK:
//!
//! ```text
//!  x:  -7  -5  -3  -1   1   3   5   7
//!     110 111 101 100 000 001 011 010
//! ```

use crate::error::ShapingError;

/// Index of amplitude `a` in `1, 3, …, 2^m - 1`.
pub fn amplitude_index(a: i32, m: u32) -> Result<usize, ShapingError> {
    let amax = (1i32 << m) - 1;
    if a < 1 || a > amax || a % 2 == 0 {
        return Err(ShapingError::Alphabet { symbol: a, m });
    }
    Ok(((a - 1) / 2) as usize)
}

/// The `m - 1` Gray-coded bits of the amplitude with index `idx`.
#[inline]
pub fn amplitude_index_bits(idx: usize, m: u32, out: &mut [u8]) {
    let g = idx ^ (idx >> 1);
    let nb = (m - 1) as usize;
    for (j, o) in out[..nb].iter_mut().enumerate() {
        *o = ((g >> (nb - 1 - j)) & 1) as u8;
    }
}

/// Inverse of [`amplitude_index_bits`].
#[inline]
pub fn amplitude_index_from_bits(bits: &[u8]) -> usize {
    let mut g = 0usize;
    for &b in bits {
        g = (g << 1) | (b & 1) as usize;
    }
    let mut idx = g;
    let mut shift = g >> 1;
    while shift != 0 {
        idx ^= shift;
        shift >>= 1;
    }
    idx
}

pub fn brgc_amplitude_bits(a: i32, m: u32) -> Result<Vec<u8>, ShapingError> {
    let idx = amplitude_index(a, m)?;
    let mut out = vec![0u8; (m - 1) as usize];
    amplitude_index_bits(idx, m, &mut out);
    Ok(out)
}

/// Full `m`-bit label of a signed symbol.
pub fn brgc_label(x: i32, m: u32) -> Result<Vec<u8>, ShapingError> {
    let idx = amplitude_index(x.abs(), m).map_err(|_| ShapingError::Alphabet { symbol: x, m })?;
    let mut out = vec![0u8; m as usize];
    out[0] = (x < 0) as u8;
    amplitude_index_bits(idx, m, &mut out[1..]);
    Ok(out)
}
