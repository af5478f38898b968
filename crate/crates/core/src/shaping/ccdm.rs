//! Constant composition distribution matching by exact multiset unranking.
//!
//! The matcher interprets `k` input bits (first bit most significant) as an
//! index into the lexicographically ordered list of all amplitude sequences
//! with a fixed composition, where amplitude index 0 (amplitude 1) sorts
//! first. `k = floor(log2(n! / Π c_a!))`, so every `k`-bit input has an image
//! and the map is injective.

use num_bigint::BigUint;
use num_traits::One;

use std::cmp::Ordering;
use std::sync::Arc;

use super::limbs::{self, Nat};
use super::mb::MbDistribution;
use crate::error::ShapingError;

/// Exact symbol counts of every matcher output, indexed by ascending
/// amplitude.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmplitudeComposition {
    n: usize,
    counts: Vec<usize>,
}

impl AmplitudeComposition {
    pub fn new(counts: Vec<usize>) -> Result<Self, ShapingError> {
        let n: usize = counts.iter().sum();
        if counts.is_empty() || n == 0 {
            return Err(ShapingError::EmptyComposition);
        }
        Ok(Self { n, counts })
    }

    /// `n`-type approximation of the amplitude PMF by largest remainders:
    /// start from `floor(n P_A)` and hand the missing units to the largest
    /// fractional parts, ties going to the smaller amplitude.
    pub fn quantize(dist: &MbDistribution, n: usize) -> Result<Self, ShapingError> {
        Self::quantize_pmf(&dist.amplitude_pmf(), n)
    }

    pub fn quantize_pmf(pmf: &[f64], n: usize) -> Result<Self, ShapingError> {
        if pmf.is_empty() || n == 0 {
            return Err(ShapingError::EmptyComposition);
        }
        let targets: Vec<f64> = pmf.iter().map(|p| p * n as f64).collect();
        let mut counts: Vec<usize> = targets.iter().map(|t| t.floor().max(0.0) as usize).collect();
        let mut order: Vec<usize> = (0..pmf.len()).collect();
        let placed: usize = counts.iter().sum();
        if placed <= n {
            order.sort_by(|&a, &b| {
                let ra = targets[a] - counts[a] as f64;
                let rb = targets[b] - counts[b] as f64;
                rb.total_cmp(&ra).then(a.cmp(&b))
            });
            for &i in order.iter().cycle().take(n - placed) {
                counts[i] += 1;
            }
        } else {
            // only reachable through floating-point excess; trim the
            // smallest remainders
            order.sort_by(|&a, &b| {
                let ra = targets[a] - counts[a] as f64;
                let rb = targets[b] - counts[b] as f64;
                ra.total_cmp(&rb).then(b.cmp(&a))
            });
            let mut excess = placed - n;
            for &i in order.iter().cycle() {
                if excess == 0 {
                    break;
                }
                if counts[i] > 0 {
                    counts[i] -= 1;
                    excess -= 1;
                }
            }
        }
        Self::new(counts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Entropy of the empirical distribution `counts / n`, in bits.
    pub fn entropy(&self) -> f64 {
        let n = self.n as f64;
        self.counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum()
    }
}

/// `n! / Π c_a!` computed exactly from its prime factorization.
pub fn multinomial(counts: &[usize]) -> BigUint {
    let n: usize = counts.iter().sum();
    if n < 2 {
        return BigUint::one();
    }
    let mut factors: Vec<BigUint> = Vec::new();
    for p in primes_up_to(n) {
        let mut e = legendre(n, p);
        for &c in counts {
            e -= legendre(c, p);
        }
        if e > 0 {
            factors.push(BigUint::from(p).pow(e as u32));
        }
    }
    product_tree(factors)
}

fn legendre(n: usize, p: usize) -> usize {
    let mut e = 0;
    let mut q = n;
    while q >= p {
        q /= p;
        e += q;
    }
    e
}

fn primes_up_to(n: usize) -> Vec<usize> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn product_tree(mut xs: Vec<BigUint>) -> BigUint {
    if xs.is_empty() {
        return BigUint::one();
    }
    while xs.len() > 1 {
        let mut next = Vec::with_capacity(xs.len().div_ceil(2));
        let mut it = xs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        xs = next;
    }
    xs.pop().unwrap()
}

/// Below this length the rate is always taken from the exact multinomial.
const EXACT_RATE_LIMIT: usize = 4096;
/// Distance (in bits) to the nearest integer under which the floating-point
/// estimate is not trusted.
const RATE_GUARD_BITS: f64 = 1e-6;

/// `k = floor(log2(n! / Π c_a!))`.
///
/// Long sequences use a log-gamma estimate whose absolute error is orders of
/// magnitude below the guard band; whenever the estimate falls inside the
/// guard band around an integer the exact multinomial decides.
pub fn ccdm_rate(comp: &AmplitudeComposition) -> usize {
    if comp.n <= EXACT_RATE_LIMIT {
        return exact_rate(comp);
    }
    let ln = |x: usize| statrs::function::gamma::ln_gamma(x as f64 + 1.0);
    let mut nats = ln(comp.n);
    for &c in &comp.counts {
        nats -= ln(c);
    }
    let bits = nats / std::f64::consts::LN_2;
    let nearest = bits.round();
    if (bits - nearest).abs() < RATE_GUARD_BITS * bits.max(1.0) {
        exact_rate(comp)
    } else {
        bits.floor().max(0.0) as usize
    }
}

fn exact_rate(comp: &AmplitudeComposition) -> usize {
    (multinomial(&comp.counts).bits() - 1) as usize
}

/// A CCDM for one composition.
#[derive(Debug, Clone)]
pub struct CcdmCodec {
    composition: AmplitudeComposition,
    k: usize,
    num_sequences: BigUint,
    tables: Arc<StepTables>,
}

impl CcdmCodec {
    pub fn new(composition: AmplitudeComposition) -> Self {
        let num_sequences = multinomial(&composition.counts);
        let k = (num_sequences.bits() - 1) as usize;
        let tables = Arc::new(StepTables::new(composition.n));
        Self {
            composition,
            k,
            num_sequences,
            tables,
        }
    }

    pub fn composition(&self) -> &AmplitudeComposition {
        &self.composition
    }

    /// Number of input bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Output length.
    pub fn n(&self) -> usize {
        self.composition.n
    }

    /// Number of sequences with this composition.
    pub fn num_sequences(&self) -> &BigUint {
        &self.num_sequences
    }

    /// Maps `k` bits to a sequence of amplitude indices.
    pub fn match_bits(&self, u: &[u8]) -> Result<Vec<usize>, ShapingError> {
        if u.len() != self.k {
            return Err(ShapingError::Length {
                expected: self.k,
                actual: u.len(),
            });
        }
        Ok(self.unrank(bits_to_uint(u)))
    }

    /// Inverse of [`match_bits`](Self::match_bits).
    pub fn dematch(&self, seq: &[usize]) -> Result<Vec<u8>, ShapingError> {
        let rank = self.rank(seq)?;
        if rank.bits() > self.k as u64 {
            return Err(ShapingError::OutsideImage);
        }
        Ok(uint_to_bits(&rank, self.k))
    }

    /// Sequence at lexicographic position `index < num_sequences`.
    ///
    /// Runs of symbols are first guessed from a fixed-point copy of the
    /// state, then confirmed exactly: the sequences sharing a prefix occupy
    /// one contiguous rank interval, so a guessed prefix is correct iff the
    /// index falls inside that interval. A rejected guess falls back to one
    /// exact step.
    pub fn unrank(&self, index: BigUint) -> Vec<usize> {
        debug_assert!(index < self.num_sequences);
        let n = self.composition.n;
        let mut state = Enumeration::start(&self.composition, limbs::from_biguint(&self.num_sequences));
        let mut rho = limbs::from_biguint(&index);
        let mut fac = Factorizer::new(&self.tables);
        let mut out = Vec::with_capacity(n);
        while state.remaining > 0 {
            if limbs::bits(&state.total) <= 64 {
                // exact ties are common this close to the end
                let rho = rho.first().copied().unwrap_or(0);
                state.finish_small(rho, &mut out);
                break;
            }
            let guess = state.guess_run(&rho, MAX_RUN, &self.tables.log2);
            let (offset, count) = state.run(&guess, &mut fac);
            let inside = limbs::cmp(&rho, &offset) != Ordering::Less && {
                let mut rest = rho.clone();
                limbs::sub_in_place(&mut rest, &offset);
                let ok = limbs::cmp(&rest, &count) == Ordering::Less;
                if ok {
                    rho = rest;
                }
                ok
            };
            if inside {
                state.total = count;
                state.advance(&guess);
                out.extend_from_slice(&guess);
            } else {
                out.push(state.exact_step(&mut rho));
            }
        }
        out
    }

    /// Lexicographic position of `seq`; errors unless it has the codec
    /// composition.
    pub fn rank(&self, seq: &[usize]) -> Result<BigUint, ShapingError> {
        let comp = &self.composition;
        if seq.len() != comp.n {
            return Err(ShapingError::CompositionMismatch);
        }
        let mut hist = vec![0usize; comp.counts.len()];
        for &a in seq {
            *hist.get_mut(a).ok_or(ShapingError::CompositionMismatch)? += 1;
        }
        if hist != comp.counts {
            return Err(ShapingError::CompositionMismatch);
        }
        let mut state = Enumeration::start(comp, limbs::from_biguint(&self.num_sequences));
        let mut fac = Factorizer::new(&self.tables);
        let mut rank = Nat::new();
        for run in seq.chunks(RANK_RUN) {
            let (offset, count) = state.run(run, &mut fac);
            let mut sum = Nat::new();
            limbs::addmul_word(&mut sum, &rank, 1);
            limbs::addmul_word(&mut sum, &offset, 1);
            rank = sum;
            state.total = count;
            state.advance(run);
        }
        Ok(limbs::to_biguint(&rank))
    }
}

/// Longest run of symbols guessed before an exact check.
const MAX_RUN: usize = 512;
/// Steps folded into the running count at once while ranking.
const RANK_RUN: usize = 256;
/// Bits of the rank ratio a guessed run may consume.
const GUESS_BITS: f64 = 160.0;

/// Position in the lexicographic enumeration: symbols still to place and the
/// number `total` of sequences that complete the prefix placed so far.
struct Enumeration {
    counts: Vec<usize>,
    remaining: usize,
    total: Nat,
}

impl Enumeration {
    fn start(comp: &AmplitudeComposition, total: Nat) -> Self {
        Self {
            counts: comp.counts.clone(),
            remaining: comp.n,
            total,
        }
    }

    fn advance(&mut self, run: &[usize]) {
        for &a in run {
            self.counts[a] -= 1;
        }
        self.remaining -= run.len();
    }

    /// Rank offset of `run` placed next and the number of sequences sharing
    /// that prefix.
    ///
    /// Per step with `c` copies of the chosen symbol left, `r` symbols left
    /// and `b` of them sorting below it, the offset grows by `total * b / r`
    /// and `total` becomes `total * c / r`. Over a run, with `C = Π c`,
    /// `R = Π r`, `g = gcd(C, R)` and
    /// `t = Σ_i b_i Π_{j<i} c_j Π_{j>i} r_j`, the count is
    /// `(total / (R/g)) * (C/g)` and the offset `(total / (R/g)) * t / g`,
    /// with exact divisions. `g` comes from prime factorizations of the step
    /// factors, which keeps every operand on `total` short.
    fn run(&self, run: &[usize], fac: &mut Factorizer) -> (Nat, Nat) {
        let mut counts = self.counts.clone();
        let mut remaining = self.remaining;
        let width = 64 - (remaining as u64).leading_zeros();
        let group = (64 / width.max(1)).max(1) as usize;
        // t by Horner over groups small enough for one machine word
        let words = run.len() * width as usize / 64 + 2;
        let (mut t, mut c_acc) = (Nat::with_capacity(words), Nat::with_capacity(words));
        c_acc.push(1);
        let mut scratch = Nat::with_capacity(self.total.len() + words);
        for g in run.chunks(group) {
            let (mut gc, mut gr, mut gt) = (1u64, 1u64, 0u64);
            for &a in g {
                let c = counts[a] as u64;
                let r = remaining as u64;
                let b = counts[..a].iter().sum::<usize>() as u64;
                // gt < gr always, so nothing here overflows
                gt = gt * r + gc * b;
                gc *= c;
                gr *= r;
                fac.add(r as usize, true);
                fac.add(c as usize, false);
                counts[a] -= 1;
                remaining -= 1;
            }
            limbs::mul_word_in_place(&mut t, gr);
            limbs::addmul_word(&mut t, &c_acc, gt);
            limbs::mul_word_in_place(&mut c_acc, gc);
        }
        let f = fac.drain(words);
        let mut scaled = self.total.clone();
        limbs::shr_in_place(&mut scaled, f.r_twos as u64);
        limbs::div_exact_in_place(&mut scaled, &f.r_odd);
        let mut count = Nat::new();
        limbs::mul_into(&scaled, &f.c_odd, &mut count);
        limbs::shl_in_place(&mut count, f.c_twos as u64);
        limbs::mul_into(&scaled, &t, &mut scratch);
        limbs::shr_in_place(&mut scratch, f.g_twos as u64);
        limbs::div_exact_in_place(&mut scratch, &f.g_odd);
        (scratch, count)
    }

    /// Replays the enumeration on a 192-bit fixed-point copy of
    /// `rho / total` until about `GUESS_BITS` bits of it have been consumed.
    /// The result may be wrong near block boundaries; callers verify it.
    fn guess_run(&self, rho: &[u64], max_len: usize, log2: &[f64]) -> Vec<usize> {
        let shift = limbs::bits(&self.total).saturating_sub(256);
        let top = |v: &[u64]| {
            let w = (shift / 64) as usize;
            let x = limbs::to_biguint(v.get(w..).unwrap_or(&[]));
            x >> (shift % 64)
        };
        let ratio = (top(rho) << 192u32) / top(&self.total);
        let mut x = [0u64; 3];
        if ratio.bits() > 192 {
            x = [u64::MAX; 3];
        } else {
            for (xi, d) in x.iter_mut().zip(ratio.iter_u64_digits()) {
                *xi = d;
            }
        }
        let mut counts = self.counts.clone();
        let mut remaining = self.remaining;
        let mut budget = GUESS_BITS;
        let mut run = Vec::new();
        while run.len() < max_len && remaining > 0 && budget > 0.0 {
            let (slot, frac) = fixed_mul(&x, remaining as u64);
            let mut cum = 0usize;
            let mut chosen = None;
            for (a, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                chosen = Some((a, cum));
                if (slot as usize) < cum + c {
                    break;
                }
                cum += c;
            }
            let (a, cum) = chosen.expect("a live symbol");
            let c = counts[a];
            let within = (slot as usize).saturating_sub(cum).min(c - 1) as u64;
            x = fixed_div(within, &frac, c as u64);
            budget -= log2[remaining] - log2[c];
            counts[a] -= 1;
            remaining -= 1;
            run.push(a);
        }
        run
    }

    /// One step by direct arithmetic on `total`.
    fn exact_step(&mut self, rho: &mut Nat) -> usize {
        let r = self.remaining as u64;
        let bound = |cum: usize| {
            // total * cum / r is exact
            let mut x = self.total.clone();
            limbs::mul_word_in_place(&mut x, cum as u64);
            limbs::shr_in_place(&mut x, r.trailing_zeros() as u64);
            limbs::div_exact_in_place(&mut x, &[r >> r.trailing_zeros()]);
            x
        };
        let mut cum = 0usize;
        let mut lo = Nat::new();
        for a in 0..self.counts.len() {
            let c = self.counts[a];
            if c == 0 {
                continue;
            }
            let hi = bound(cum + c);
            if limbs::cmp(rho, &hi) == Ordering::Less {
                limbs::sub_in_place(rho, &lo);
                let mut span = hi;
                limbs::sub_in_place(&mut span, &lo);
                self.total = span;
                self.advance(&[a]);
                return a;
            }
            cum += c;
            lo = hi;
        }
        unreachable!("rank below total always selects a symbol")
    }

    /// Remaining steps once `total` fits a machine word.
    fn finish_small(&mut self, mut rho: u64, out: &mut Vec<usize>) {
        let mut total = self.total.first().copied().unwrap_or(0) as u128;
        while self.remaining > 0 {
            let r = self.remaining as u128;
            let mut cum = 0u128;
            let mut lo = 0u128;
            for a in 0..self.counts.len() {
                let c = self.counts[a] as u128;
                if c == 0 {
                    continue;
                }
                let hi = total * (cum + c) / r;
                if (rho as u128) < hi {
                    rho -= lo as u64;
                    total = hi - lo;
                    self.counts[a] -= 1;
                    self.remaining -= 1;
                    out.push(a);
                    break;
                }
                cum += c;
                lo = hi;
            }
        }
    }
}

/// `x * r` for a 0.192 fixed-point `x` (little-endian digits): integer part
/// and fraction.
fn fixed_mul(x: &[u64; 3], r: u64) -> (u64, [u64; 3]) {
    let mut out = [0u64; 3];
    let mut carry = 0u64;
    for (o, &xi) in out.iter_mut().zip(x) {
        let t = xi as u128 * r as u128 + carry as u128;
        *o = t as u64;
        carry = (t >> 64) as u64;
    }
    (carry, out)
}

/// `(int + frac / 2^192) / d` as a 0.192 fixed-point value, for `int < d`.
fn fixed_div(int: u64, frac: &[u64; 3], d: u64) -> [u64; 3] {
    let mut out = [0u64; 3];
    let mut rem = int;
    for i in (0..3).rev() {
        let t = ((rem as u128) << 64) | frac[i] as u128;
        out[i] = (t / d as u128) as u64;
        rem = (t % d as u128) as u64;
    }
    out
}

/// Odd parts and powers of two of `R/g`, `C/g` and `g` for one run.
struct RunFactors {
    r_odd: Nat,
    r_twos: u32,
    c_odd: Nat,
    c_twos: u32,
    g_odd: Nat,
    g_twos: u32,
}

/// Per-length lookup tables shared by all runs of a codec.
#[derive(Debug)]
struct StepTables {
    /// Smallest prime factor of every integer up to `n`.
    spf: Vec<u32>,
    /// `x / spf[x]`.
    cofactor: Vec<u32>,
    log2: Vec<f64>,
}

impl StepTables {
    fn new(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let cofactor = (0..=n)
            .map(|x| if x < 2 { 1 } else { (x / spf[x] as usize) as u32 })
            .collect();
        let log2 = (0..=n).map(|x| (x as f64).log2()).collect();
        Self { spf, cofactor, log2 }
    }
}

/// Prime exponent bookkeeping for the factors of one run.
struct Factorizer<'a> {
    tables: &'a StepTables,
    from_r: Vec<u32>,
    from_c: Vec<u32>,
    touched: Vec<u32>,
}

impl<'a> Factorizer<'a> {
    fn new(tables: &'a StepTables) -> Self {
        let n = tables.spf.len();
        Self {
            tables,
            from_r: vec![0; n],
            from_c: vec![0; n],
            touched: Vec::new(),
        }
    }

    fn add(&mut self, mut x: usize, remaining: bool) {
        while x > 1 {
            let p = self.tables.spf[x] as usize;
            if self.from_r[p] == 0 && self.from_c[p] == 0 {
                self.touched.push(p as u32);
            }
            if remaining {
                self.from_r[p] += 1;
            } else {
                self.from_c[p] += 1;
            }
            x = self.tables.cofactor[x] as usize;
        }
    }

    /// Splits the collected factors and resets the tables.
    fn drain(&mut self, words: usize) -> RunFactors {
        let (mut r, mut c, mut g) = (Product::new(words), Product::new(words), Product::new(words));
        let mut twos = (0, 0, 0);
        for &p in &self.touched {
            let p = p as usize;
            let (er, ec) = (self.from_r[p], self.from_c[p]);
            let common = er.min(ec);
            if p == 2 {
                twos = (er - common, ec - common, common);
            } else {
                g.push_pow(p as u64, common);
                r.push_pow(p as u64, er - common);
                c.push_pow(p as u64, ec - common);
            }
            self.from_r[p] = 0;
            self.from_c[p] = 0;
        }
        self.touched.clear();
        RunFactors {
            r_odd: r.finish(),
            r_twos: twos.0,
            c_odd: c.finish(),
            c_twos: twos.1,
            g_odd: g.finish(),
            g_twos: twos.2,
        }
    }
}

/// Product of small factors, packed into a machine word before each
/// multi-digit multiplication.
struct Product {
    word: u64,
    acc: Nat,
}

impl Product {
    fn new(words: usize) -> Self {
        let mut acc = Nat::with_capacity(words);
        acc.push(1);
        Self { word: 1, acc }
    }

    fn push_pow(&mut self, f: u64, e: u32) {
        for _ in 0..e {
            match self.word.checked_mul(f) {
                Some(w) => self.word = w,
                None => {
                    limbs::mul_word_in_place(&mut self.acc, self.word);
                    self.word = f;
                }
            }
        }
    }

    fn finish(mut self) -> Nat {
        limbs::mul_word_in_place(&mut self.acc, self.word);
        self.acc
    }
}

/// Big-endian bit vector to integer.
pub fn bits_to_uint(bits: &[u8]) -> BigUint {
    let pad = (8 - bits.len() % 8) % 8;
    let mut bytes = Vec::with_capacity(bits.len().div_ceil(8));
    let mut acc = 0u8;
    let mut filled = pad;
    for &b in bits {
        acc = (acc << 1) | (b & 1);
        filled += 1;
        if filled == 8 {
            bytes.push(acc);
            acc = 0;
            filled = 0;
        }
    }
    BigUint::from_bytes_be(&bytes)
}

/// Integer to a big-endian bit vector of exactly `len` bits.
pub fn uint_to_bits(x: &BigUint, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    let bits = x.bits() as usize;
    debug_assert!(bits <= len);
    for i in 0..bits.min(len) {
        if x.bit(i as u64) {
            out[len - 1 - i] = 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_small_values() {
        assert_eq!(multinomial(&[2, 2]), BigUint::from(6u32));
        assert_eq!(multinomial(&[2, 2, 2, 2]), BigUint::from(2520u32));
        assert_eq!(multinomial(&[5]), BigUint::one());
        assert_eq!(multinomial(&[0, 3, 0]), BigUint::one());
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
    }

    #[test]
    fn rates_of_small_compositions() {
        let rate = |c: Vec<usize>| ccdm_rate(&AmplitudeComposition::new(c).unwrap());
        assert_eq!(rate(vec![2, 2]), 2);
        assert_eq!(rate(vec![2, 2, 2, 2]), 11);
        assert_eq!(rate(vec![0, 7, 0]), 0);
    }

    #[test]
    fn quantization_rules() {
        let q = |p: &[f64], n| AmplitudeComposition::quantize_pmf(p, n).unwrap();
        assert_eq!(q(&[0.25; 4], 8).counts(), &[2, 2, 2, 2]);
        assert_eq!(q(&[0.7, 0.2, 0.07, 0.03], 10).counts(), &[7, 2, 1, 0]);
        assert_eq!(q(&[0.1, 0.4, 0.4, 0.1], 1).counts(), &[0, 1, 0, 0]);
        assert_eq!(q(&[0.5, 0.5], 3).counts(), &[2, 1]);
    }

    #[test]
    fn bit_conversions() {
        let bits = [1, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1];
        let x = bits_to_uint(&bits);
        assert_eq!(x, BigUint::from(0b10110000011u32));
        assert_eq!(uint_to_bits(&x, bits.len()), bits);
        assert_eq!(uint_to_bits(&BigUint::ZERO, 3), vec![0, 0, 0]);
    }

    #[test]
    fn first_sequence_is_sorted() {
        let c = CcdmCodec::new(AmplitudeComposition::new(vec![2, 2]).unwrap());
        assert_eq!(c.k(), 2);
        assert_eq!(c.match_bits(&[0, 0]).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(c.dematch(&[0, 0, 1, 1]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn image_and_composition_errors() {
        let c = CcdmCodec::new(AmplitudeComposition::new(vec![2, 2]).unwrap());
        // ranks 4 and 5 exist as sequences but lie outside the 2-bit image
        assert_eq!(c.dematch(&[1, 1, 0, 0]), Err(ShapingError::OutsideImage));
        assert_eq!(
            c.dematch(&[0, 1, 1, 1]),
            Err(ShapingError::CompositionMismatch)
        );
        assert_eq!(c.dematch(&[0, 1, 1]), Err(ShapingError::CompositionMismatch));
        assert_eq!(c.dematch(&[0, 1, 2, 1]), Err(ShapingError::CompositionMismatch));
        assert!(c.match_bits(&[0]).is_err());
    }
}
