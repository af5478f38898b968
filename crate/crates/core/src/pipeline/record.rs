//! Flat binary layout of a transmitted frame, for golden files.
//!
//! All integers little-endian:
//!
//! ```text
//! magic   4 bytes  "PASF"
//! v, t, s, m       4 x u32
//! seed             u64
//! len(u)           u64, then u packed 8 bits per byte, first bit in the MSB
//! len(x)           u64, then x as f64
//! ```

use crate::error::PasError;

use super::frame::TxFrame;
use super::params::PasParams;

const MAGIC: &[u8; 4] = b"PASF";

/// Header and payload of a serialized frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub v: u32,
    pub t: u32,
    pub s: u32,
    pub m: u32,
    pub seed: u64,
    pub u: Vec<u8>,
    pub x: Vec<f64>,
}

impl FrameRecord {
    pub fn new(params: &PasParams, frame: &TxFrame) -> Self {
        Self {
            v: params.v,
            t: params.t,
            s: params.s,
            m: params.m,
            seed: params.seed,
            u: frame.u.clone(),
            x: frame.x.clone(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(36 + self.u.len() / 8 + 8 * self.x.len());
        out.extend_from_slice(MAGIC);
        for w in [self.v, self.t, self.s, self.m] {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&(self.u.len() as u64).to_le_bytes());
        for chunk in self.u.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)));
            out.push(byte);
        }
        out.extend_from_slice(&(self.x.len() as u64).to_le_bytes());
        for &x in &self.x {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PasError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(PasError::Record("bad magic".into()));
        }
        let v = r.u32()?;
        let t = r.u32()?;
        let s = r.u32()?;
        let m = r.u32()?;
        let seed = r.u64()?;
        let ulen = r.len()?;
        let packed = r.take(ulen.div_ceil(8))?;
        let u = (0..ulen).map(|i| (packed[i / 8] >> (7 - i % 8)) & 1).collect();
        let xlen = r.len()?;
        let x = (0..xlen)
            .map(|_| r.take(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())))
            .collect::<Result<_, _>>()?;
        if r.pos != bytes.len() {
            return Err(PasError::Record("trailing bytes".into()));
        }
        Ok(Self {
            v,
            t,
            s,
            m,
            seed,
            u,
            x,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], PasError> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| PasError::Record("truncated".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, PasError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, PasError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn len(&mut self) -> Result<usize, PasError> {
        let l = self.u64()?;
        usize::try_from(l)
            .ok()
            .filter(|&l| l <= self.bytes.len() * 8)
            .ok_or_else(|| PasError::Record(format!("implausible length {l}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let rec = FrameRecord {
            v: 4,
            t: 1,
            s: 1,
            m: 2,
            seed: 9,
            u: vec![1, 0, 1, 1, 0, 0, 0, 0, 1],
            x: vec![-1.5, 0.25],
        };
        let b = rec.to_bytes();
        assert_eq!(&b[..4], b"PASF");
        assert_eq!(b[36..38], [0b1011_0000, 0b1000_0000]);
        assert_eq!(b.len(), 4 + 16 + 8 + 8 + 2 + 8 + 16);
        assert_eq!(FrameRecord::from_bytes(&b).unwrap(), rec);
        assert!(FrameRecord::from_bytes(&b[..b.len() - 1]).is_err());
    }
}
