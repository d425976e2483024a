// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact-integer reference implementations.
//!
//! Every metered operation in this crate is validated against these oracles;
//! they use plain machine arithmetic and make no claim about step counts.

/// ⌈√x⌉ for x ≥ 1.
pub fn sqrt_ceil(x: u128) -> u128 {
    let r = isqrt(x);
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// ⌊√x⌋.
pub fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r.checked_mul(r).map_or(true, |sq| sq > x) {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// ⌊x^{1/c}⌋ for c ≥ 1, x ≥ 0.
pub fn iroot(x: u128, c: u32) -> u128 {
    assert!(c >= 1);
    if c == 1 || x < 2 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / c as f64) as u128;
    r += 2;
    while pow_checked(r, c).map_or(true, |p| p > x) {
        r -= 1;
    }
    r
}

/// x^y when it fits in u128.
pub fn pow_checked(x: u128, y: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..y {
        acc = acc.checked_mul(x)?;
    }
    Some(acc)
}

/// x^y, or None when the result would reach `limit`.
pub fn pow_below(x: u128, y: u128, limit: u128) -> Option<u128> {
    if x <= 1 {
        return Some(if x == 1 || y == 0 { 1 } else { 0 }).filter(|&v| v < limit);
    }
    let mut acc: u128 = 1;
    for _ in 0..y {
        acc = acc.checked_mul(x)?;
        if acc >= limit {
            return None;
        }
    }
    Some(acc)
}

/// ⌊log_x y⌋ for x ≥ 2, y ≥ 1.
pub fn ilog(x: u128, y: u128) -> u128 {
    assert!(x >= 2 && y >= 1);
    let mut l = 0u128;
    let mut p: u128 = 1;
    while let Some(next) = p.checked_mul(x) {
        if next > y {
            break;
        }
        p = next;
        l += 1;
    }
    l
}

/// Number of bits of x, with length(0) defined as 1.
pub fn bit_length(x: u128) -> u128 {
    if x == 0 {
        1
    } else {
        (128 - x.leading_zeros()) as u128
    }
}

/// Concatenation of binary strings: x · 2^length(y) + y.
pub fn conc(x: u128, y: u128) -> u128 {
    (x << bit_length(y)) + y
}

/// Bit i of x (bit 0 least significant).
pub fn bit(x: u128, i: u32) -> u128 {
    (x >> i) & 1
}

/// Bits j..i of x (the substring (x mod 2^i) div 2^j).
pub fn substring(x: u128, i: u32, j: u32) -> u128 {
    (x % (1u128 << i)) >> j
}

/// Whether the binary string of x is a suffix of that of y.
pub fn is_suffix(x: u128, y: u128) -> bool {
    let lx = bit_length(x) as u32;
    bit_length(x) <= bit_length(y) && x == substring(y, lx, 0)
}

/// Whether the binary string of x is a prefix of that of y.
pub fn is_prefix(x: u128, y: u128) -> bool {
    let lx = bit_length(x) as u32;
    let ly = bit_length(y) as u32;
    lx <= ly && x == substring(y, ly, ly - lx)
}
