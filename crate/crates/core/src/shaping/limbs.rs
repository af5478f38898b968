//! Natural numbers as little-endian `u64` digit vectors without trailing
//! zero digits. Just enough arithmetic for the matcher's inner loop, done in
//! place to keep allocations out of it.

use std::cmp::Ordering;

use num_bigint::BigUint;

pub(crate) type Nat = Vec<u64>;

pub(crate) fn normalize(v: &mut Nat) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn from_biguint(x: &BigUint) -> Nat {
    x.iter_u64_digits().collect()
}

pub(crate) fn to_biguint(v: &[u64]) -> BigUint {
    BigUint::new(v.iter().flat_map(|&x| [x as u32, (x >> 32) as u32]).collect())
}

pub(crate) fn bits(v: &[u64]) -> u64 {
    match v.last() {
        None => 0,
        Some(&top) => 64 * v.len() as u64 - top.leading_zeros() as u64,
    }
}

pub(crate) fn cmp(a: &[u64], b: &[u64]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// `a -= b` for `a >= b`.
pub(crate) fn sub_in_place(a: &mut Nat, b: &[u64]) {
    debug_assert!(cmp(a, b) != Ordering::Less);
    let mut borrow = false;
    for (i, ai) in a.iter_mut().enumerate() {
        let bi = b.get(i).copied().unwrap_or(0);
        if i >= b.len() && !borrow {
            break;
        }
        let (v, b1) = ai.overflowing_sub(bi);
        let (v, b2) = v.overflowing_sub(borrow as u64);
        *ai = v;
        borrow = b1 | b2;
    }
    normalize(a);
}

/// `a * f`.
pub(crate) fn mul_word_in_place(a: &mut Nat, f: u64) {
    if f == 0 {
        a.clear();
        return;
    }
    let mut carry = 0u64;
    for x in a.iter_mut() {
        let t = *x as u128 * f as u128 + carry as u128;
        *x = t as u64;
        carry = (t >> 64) as u64;
    }
    if carry != 0 {
        a.push(carry);
    }
}

/// `acc += a * f`.
pub(crate) fn addmul_word(acc: &mut Nat, a: &[u64], f: u64) {
    if f == 0 || a.is_empty() {
        return;
    }
    if acc.len() < a.len() + 1 {
        acc.resize(a.len() + 1, 0);
    }
    let mut carry = 0u64;
    for (x, &y) in acc.iter_mut().zip(a) {
        let t = y as u128 * f as u128 + *x as u128 + carry as u128;
        *x = t as u64;
        carry = (t >> 64) as u64;
    }
    for x in acc[a.len()..].iter_mut() {
        if carry == 0 {
            break;
        }
        let (v, o) = x.overflowing_add(carry);
        *x = v;
        carry = o as u64;
    }
    if carry != 0 {
        acc.push(carry);
    }
    normalize(acc);
}

/// `out = a * b`, schoolbook; meant for a short `b`.
pub(crate) fn mul_into(a: &[u64], b: &[u64], out: &mut Nat) {
    out.clear();
    if a.is_empty() || b.is_empty() {
        return;
    }
    out.resize(a.len() + b.len(), 0);
    // two digits of b per pass: out[k] += a[k] b0 + a[k-1] b1
    let mut j = 0;
    while j + 1 < b.len() {
        let (b0, b1) = (b[j] as u128, b[j + 1] as u128);
        let o = &mut out[j..j + a.len() + 2];
        let (mut c0, mut c1) = (0u64, 0u64);
        let mut prev = 0u64;
        for (ok, &ai) in o.iter_mut().zip(a) {
            let t0 = ai as u128 * b0 + *ok as u128 + c0 as u128;
            let t1 = prev as u128 * b1 + (t0 as u64) as u128 + c1 as u128;
            *ok = t1 as u64;
            c0 = (t0 >> 64) as u64;
            c1 = (t1 >> 64) as u64;
            prev = ai;
        }
        let k = a.len();
        let t1 = prev as u128 * b1 + c0 as u128 + c1 as u128;
        o[k] = t1 as u64;
        o[k + 1] = (t1 >> 64) as u64;
        j += 2;
    }
    if j < b.len() {
        let bj = b[j];
        let mut carry = 0u64;
        for (o, &ai) in out[j..j + a.len()].iter_mut().zip(a) {
            let t = ai as u128 * bj as u128 + *o as u128 + carry as u128;
            *o = t as u64;
            carry = (t >> 64) as u64;
        }
        out[j + a.len()] = carry;
    }
    normalize(out);
}

pub(crate) fn shr_in_place(v: &mut Nat, shift: u64) {
    let words = (shift / 64) as usize;
    let s = (shift % 64) as u32;
    if words >= v.len() {
        v.clear();
        return;
    }
    v.drain(..words);
    if s > 0 {
        let n = v.len();
        for i in 0..n {
            let hi = if i + 1 < n { v[i + 1] << (64 - s) } else { 0 };
            v[i] = (v[i] >> s) | hi;
        }
    }
    normalize(v);
}

pub(crate) fn shl_in_place(v: &mut Nat, shift: u64) {
    if v.is_empty() {
        return;
    }
    let words = (shift / 64) as usize;
    let s = (shift % 64) as u32;
    if s > 0 {
        let mut carry = 0u64;
        for x in v.iter_mut() {
            let nx = (*x << s) | carry;
            carry = *x >> (64 - s);
            *x = nx;
        }
        if carry != 0 {
            v.push(carry);
        }
    }
    if words > 0 {
        v.splice(0..0, std::iter::repeat_n(0, words));
    }
}

/// `v / d` for an odd `d` dividing `v`, by 2-adic (Hensel) division: the
/// quotient digits come from the low end without trial division.
pub(crate) fn div_exact_in_place(v: &mut Nat, d: &[u64]) {
    debug_assert!(!d.is_empty() && d[0] & 1 == 1);
    if v.len() < d.len() {
        debug_assert!(v.is_empty());
        v.clear();
        return;
    }
    let qlen = v.len() - d.len() + 1;
    hensel_low(v, d, qlen);
    normalize(v);
}

/// Low `qlen` digits of `w / d` for odd `d`, given that the division is exact
/// modulo `2^(64 qlen)`; only the low `qlen` digits of `w` are read. The
/// result replaces `w`.
pub(crate) fn hensel_low(w: &mut Nat, d: &[u64], qlen: usize) {
    w.resize(w.len().max(qlen), 0);
    // inverse of the low digit modulo 2^64
    let mut inv = d[0];
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(d[0].wrapping_mul(inv)));
    }
    for i in 0..qlen {
        let qi = w[i].wrapping_mul(inv);
        // only digits below qlen influence later quotient digits
        let end = d.len().min(qlen - i);
        let mut carry = 0u64;
        for (wj, &dj) in w[i..i + end].iter_mut().zip(&d[..end]) {
            let prod = qi as u128 * dj as u128 + carry as u128;
            let (v, b) = wj.overflowing_sub(prod as u64);
            *wj = v;
            carry = (prod >> 64) as u64 + b as u64;
        }
        for wk in w[i + end..qlen].iter_mut() {
            if carry == 0 {
                break;
            }
            let (v, b) = wk.overflowing_sub(carry);
            *wk = v;
            carry = b as u64;
        }
        // the digit just cleared holds the quotient digit from here on
        w[i] = qi;
    }
    w.truncate(qlen);
}
