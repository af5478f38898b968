//! Frame geometry of one PAS stream on a product code and its feasibility.

use serde::Serialize;

use crate::bch::{max_shortening, BchCode};
use crate::error::{Infeasibility, PasError};

/// Geometry of a PAS frame carried by one `n_c x n_c` product-code array.
///
/// With `R = k_c^2 / n_c^2 = (m - 1 + gamma) / m`, a frame has
/// `n = n_c^2 / m` symbols, `(m - 1) n` amplitude bits and `gamma n`
/// uniform information bits in the `k_c x k_c` information block, and
/// `n (1 - gamma)` parity bits. Every array bit is sent exactly once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PasParams {
    pub v: u32,
    pub t: u32,
    pub s: u32,
    pub m: u32,
    pub n_c: usize,
    pub k_c: usize,
    /// Symbols per frame.
    pub n: usize,
    /// Uniform information bits carried as signs, `gamma * n`.
    pub gamma_n: usize,
    pub gamma: f64,
    /// Product-code rate.
    pub rate: f64,
    /// Interleaver seed.
    pub seed: u64,
}

impl PasParams {
    /// Derives the frame geometry and checks feasibility.
    pub fn derive(v: u32, t: u32, s: u32, m: u32, seed: u64) -> Result<Self, PasError> {
        // validates (v, t, s), including the generator degree
        BchCode::new(v, t, s)?;
        Self::derive_unchecked(v, t, s, m, seed)
    }

    /// Feasibility arithmetic only; `(v, t, s)` must already be valid.
    fn derive_unchecked(v: u32, t: u32, s: u32, m: u32, seed: u64) -> Result<Self, PasError> {
        if !(1..=crate::shaping::mb::MAX_BITS_PER_SYMBOL).contains(&m) {
            return Err(crate::error::ShapingError::BitsPerSymbol(m).into());
        }
        let infeasible = |reason| PasError::Infeasible { v, t, s, m, reason };
        let n_c = (1usize << v) - 1 - s as usize;
        let k_c = n_c - (v * t) as usize;
        let (nn, kk, mm) = (n_c * n_c, k_c * k_c, m as usize);
        if nn % mm != 0 {
            return Err(infeasible(Infeasibility::FractionalBlockLength));
        }
        let n = nn / mm;
        let amplitude_bits = (mm - 1) * n;
        if kk < amplitude_bits {
            return Err(infeasible(Infeasibility::NegativeUniformBits));
        }
        let gamma_n = kk - amplitude_bits;
        if gamma_n >= n {
            return Err(infeasible(Infeasibility::GammaTooLarge));
        }
        Ok(Self {
            v,
            t,
            s,
            m,
            n_c,
            k_c,
            n,
            gamma_n,
            gamma: gamma_n as f64 / n as f64,
            rate: kk as f64 / nn as f64,
            seed,
        })
    }

    /// Amplitude bits per frame, `(m - 1) n`.
    pub fn amplitude_bits(&self) -> usize {
        (self.m as usize - 1) * self.n
    }

    /// Parity bits per frame, `n_c^2 - k_c^2 = n (1 - gamma)`.
    pub fn parity_bits(&self) -> usize {
        self.n_c * self.n_c - self.k_c * self.k_c
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

/// Every feasible shortening `s` in `0..=2^v - v t - 2`, ascending.
pub fn enumerate_feasible(v: u32, t: u32, m: u32) -> Result<Vec<PasParams>, PasError> {
    let max = max_shortening(v, t);
    BchCode::new(v, t, 0)?;
    if max < 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for s in 0..=max as u32 {
        match PasParams::derive_unchecked(v, t, s, m, 0) {
            Ok(p) => out.push(p),
            Err(PasError::Infeasible { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
