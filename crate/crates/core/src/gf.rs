//! Arithmetic in GF(2^v) through log/antilog tables.
//!
//! Elements are stored as `u32` bit patterns in the polynomial basis, bit `i`
//! holding the coefficient of `α^i`. Zero has no logarithm and is handled
//! outside the tables.

use crate::error::BchError;

/// Smallest supported extension degree.
pub const MIN_DEGREE: u32 = 2;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// The fixed primitive polynomial for each extension degree `v`, including the
/// `x^v` term. One canonical choice per degree keeps codewords reproducible.
pub fn primitive_polynomial(v: u32) -> Option<u32> {
    let p = match v {
        2 => 0x7,      // x^2 + x + 1
        3 => 0xB,      // x^3 + x + 1
        4 => 0x13,     // x^4 + x + 1
        5 => 0x25,     // x^5 + x^2 + 1
        6 => 0x43,     // x^6 + x + 1
        7 => 0x89,     // x^7 + x^3 + 1
        8 => 0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
        9 => 0x211,    // x^9 + x^4 + 1
        10 => 0x409,   // x^10 + x^3 + 1
        11 => 0x805,   // x^11 + x^2 + 1
        12 => 0x1053,  // x^12 + x^6 + x^4 + x + 1
        13 => 0x201B,  // x^13 + x^4 + x^3 + x + 1
        14 => 0x4443,  // x^14 + x^10 + x^6 + x + 1
        15 => 0x8003,  // x^15 + x + 1
        16 => 0x1100B, // x^16 + x^12 + x^3 + x + 1
        _ => return None,
    };
    Some(p)
}

/// The field GF(2^v) with precomputed tables.
#[derive(Debug, Clone)]
pub struct GfField {
    v: u32,
    order: u32,
    poly: u32,
    // antilog has 2 * order entries so that log[a] + log[b] never needs a
    // reduction on the hot path.
    antilog: Vec<u32>,
    log: Vec<u32>,
}

impl GfField {
    pub fn new(v: u32) -> Result<Self, BchError> {
        let poly = primitive_polynomial(v).ok_or(BchError::FieldDegree(v))?;
        let size = 1u32 << v;
        let order = size - 1;
        let mut antilog = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; size as usize];
        let mut x = 1u32;
        for i in 0..order {
            antilog[i as usize] = x;
            log[x as usize] = i;
            x <<= 1;
            if x & size != 0 {
                x ^= poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial {poly:#x} is not primitive");
        for i in order..2 * order {
            antilog[i as usize] = antilog[(i - order) as usize];
        }
        Ok(Self {
            v,
            order,
            poly,
            antilog,
            log,
        })
    }

    /// Extension degree `v`.
    pub fn degree(&self) -> u32 {
        self.v
    }

    /// Multiplicative group order `2^v - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// Number of field elements, `2^v`.
    pub fn size(&self) -> u32 {
        self.order + 1
    }

    /// `α^e`, with `e` reduced modulo the group order.
    #[inline]
    pub fn exp(&self, e: u64) -> u32 {
        self.antilog[(e % self.order as u64) as usize]
    }

    /// Discrete logarithm of a nonzero element.
    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.antilog[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            let l = self.log[a as usize];
            Some(self.antilog[((self.order - l) % self.order) as usize])
        }
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    #[inline]
    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    /// `a^e` for any element (with `0^0 = 1`).
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64;
        self.exp(l * (e % self.order as u64))
    }

    /// Minimal polynomial over GF(2) of `α^i`, as a bit mask with bit `j`
    /// holding the coefficient of `x^j`.
    pub fn minimal_polynomial(&self, i: u64) -> u64 {
        let coset = self.cyclotomic_coset(i);
        // Product of (x - α^c) over the coset; coefficients land in GF(2).
        let mut coeffs: Vec<u32> = vec![1];
        for &c in &coset {
            let root = self.exp(c);
            let mut next = vec![0u32; coeffs.len() + 1];
            for (j, &a) in coeffs.iter().enumerate() {
                next[j + 1] ^= a;
                next[j] ^= self.mul(a, root);
            }
            coeffs = next;
        }
        coeffs.iter().enumerate().fold(0u64, |acc, (j, &c)| {
            debug_assert!(c <= 1, "minimal polynomial coefficient outside GF(2)");
            acc | ((c as u64 & 1) << j)
        })
    }

    /// Cyclotomic coset of `i` modulo `2^v - 1` under doubling.
    pub fn cyclotomic_coset(&self, i: u64) -> Vec<u64> {
        let n = self.order as u64;
        let start = i % n;
        let mut coset = vec![start];
        let mut j = (start * 2) % n;
        while j != start {
            coset.push(j);
            j = (j * 2) % n;
        }
        coset
    }
}
