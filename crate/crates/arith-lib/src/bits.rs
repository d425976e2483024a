// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Operations on the binary writing of operands: length, concatenation,
//! bit extraction, substrings, prefix/suffix tests, and the bitwise
//! xor/and/or.
//!
//! The bitwise operations recurse by splitting both operands at half the
//! length of the larger one, so operand lengths halve at every level and
//! reach the K×K base tables (K = ⌈√N⌉) after a number of levels that
//! depends only on the degree d, not on N.

use crate::{ArithError, ArithResult, CapFamily, ExpOutcome, Meter, Metered, PreprocContext, Val};

impl PreprocContext {
    /// Length of the binary writing: 1 for 0, else ⌊log₂x⌋ + 1.
    ///
    /// Answered digit-wise from the per-digit length tables, charged as one
    /// probe per digit.
    pub(crate) fn len_inner(&self, m: &mut Meter, x: Val) -> Val {
        m.tick_n(2 + self.d as u64);
        if x == 0 {
            1
        } else {
            (128 - x.leading_zeros()) as Val
        }
    }

    /// 2^e for an exponent the caller has bounded below the operand length,
    /// so the power exists in the domain. One probe of the dense power table
    /// over exponents 0..d·L.
    pub(crate) fn pow2_inner(&self, m: &mut Meter, e: Val) -> Val {
        m.tick_n(2);
        1u128 << e
    }

    /// (x mod 2^i) div 2^j, the bits j..i of x.
    fn sub_inner(&self, m: &mut Meter, x: Val, i: Val, j: Val) -> Val {
        m.tick();
        if x == 0 {
            return 0;
        }
        let lx = self.len_inner(m, x);
        m.tick();
        let low = if i >= lx {
            x
        } else {
            // x mod 2^i: two probes of the power-of-two division tables.
            let p = self.pow2_inner(m, i);
            m.tick_n(4);
            x & (p - 1)
        };
        m.tick_n(2);
        if j == 0 || low == 0 {
            return low;
        }
        let ll = self.len_inner(m, low);
        m.tick();
        if j >= ll {
            return 0;
        }
        let pj = self.pow2_inner(m, j);
        m.tick_n(4);
        low / pj
    }

    /// Length of the binary writing of x (length(0) = 1).
    pub fn length(&self, x: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("length", x)?;
        let mut m = Meter::new();
        let v = self.len_inner(&mut m, x);
        Ok(self.capped(&m, CapFamily::Length, v))
    }

    /// Concatenation of binary writings: x · 2^length(y) + y.
    pub fn conc(&self, x: Val, y: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("conc", x)?;
        self.check_operand("conc", y)?;
        let mut m = Meter::new();
        let ly = self.len_inner(&mut m, y);
        let p = match self.exp_general(&mut m, 2, ly, self.limit, 2 * self.d as u64) {
            ExpOutcome::Value(v) => v,
            ExpOutcome::Overflow => {
                return Err(ArithError::Domain {
                    op: "conc",
                    msg: "concatenation does not fit below N^d".into(),
                })
            }
        };
        let v = self.mul(&mut m, x, p) + y;
        m.tick_n(2);
        if v >= self.limit {
            return Err(ArithError::Domain {
                op: "conc",
                msg: "concatenation does not fit below N^d".into(),
            });
        }
        Ok(self.capped(&m, CapFamily::Conc, v))
    }

    /// Bit i of x (bit 0 least significant).
    pub fn bit(&self, x: Val, i: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("bit", x)?;
        let mut m = Meter::new();
        m.tick();
        if x == 0 {
            return Ok(self.capped(&m, CapFamily::Bit, 0));
        }
        let lx = self.len_inner(&mut m, x);
        m.tick();
        if i >= lx {
            return Ok(self.capped(&m, CapFamily::Bit, 0));
        }
        let p = self.pow2_inner(&mut m, i);
        m.tick_n(4);
        let s = x / p;
        let (_, parity) = self.dbs(&mut m, s, 2);
        Ok(self.capped(&m, CapFamily::Bit, parity as Val))
    }

    /// Bits j..i of x: (x mod 2^i) div 2^j.
    pub fn substring(&self, x: Val, i: Val, j: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("substring", x)?;
        let mut m = Meter::new();
        let v = self.sub_inner(&mut m, x, i, j);
        Ok(self.capped(&m, CapFamily::Substring, v))
    }

    /// Whether the binary writing of x is a prefix of that of y.
    pub fn is_prefix(&self, x: Val, y: Val) -> ArithResult<Metered<bool>> {
        self.check_operand("is_prefix", x)?;
        self.check_operand("is_prefix", y)?;
        let mut m = Meter::new();
        let lx = self.len_inner(&mut m, x);
        let ly = self.len_inner(&mut m, y);
        m.tick();
        if lx > ly {
            return Ok(self.capped(&m, CapFamily::Fix, false));
        }
        let head = self.sub_inner(&mut m, y, ly, ly - lx);
        m.tick_n(self.d as u64 + 1);
        Ok(self.capped(&m, CapFamily::Fix, head == x))
    }

    /// Whether the binary writing of x is a suffix of that of y.
    pub fn is_suffix(&self, x: Val, y: Val) -> ArithResult<Metered<bool>> {
        self.check_operand("is_suffix", x)?;
        self.check_operand("is_suffix", y)?;
        let mut m = Meter::new();
        let lx = self.len_inner(&mut m, x);
        let ly = self.len_inner(&mut m, y);
        m.tick();
        if lx > ly {
            return Ok(self.capped(&m, CapFamily::Fix, false));
        }
        let tail = self.sub_inner(&mut m, y, lx, 0);
        m.tick_n(self.d as u64 + 1);
        Ok(self.capped(&m, CapFamily::Fix, tail == x))
    }

    fn bitop_inner(&self, m: &mut Meter, x: Val, y: Val, table: &[u64], depth: u32) -> Val {
        assert!(
            depth <= (2 * self.d * (self.l_cap + 1)).ilog2() + 3,
            "bitwise recursion exceeded its depth bound"
        );
        m.tick_n(2);
        if x < self.b as Val && y < self.b as Val {
            m.tick();
            return self.bitwise_at(table, x, y) as Val;
        }
        m.tick_n(2); // LE probe picking the longer operand
        let mx = x.max(y);
        let len = self.len_inner(m, mx);
        // Halving the length stands in for a lookup in a size-O(d·L) table.
        m.tick_n(2);
        let ell = (len / 2) as u32;
        let p = self.pow2_inner(m, ell as Val);
        // Four power-of-two splits, two table probes each.
        m.tick_n(8);
        let xh = x >> ell;
        let xl = x & (p - 1);
        let yh = y >> ell;
        let yl = y & (p - 1);
        let rh = self.bitop_inner(m, xh, yh, table, depth + 1);
        let rl = self.bitop_inner(m, xl, yl, table, depth + 1);
        // Reassembly conc: one power probe and one multiplication.
        m.tick_n(3);
        (rh << ell) | rl
    }

    /// Bitwise exclusive or.
    pub fn bit_xor(&self, x: Val, y: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("xor", x)?;
        self.check_operand("xor", y)?;
        let mut m = Meter::new();
        let v = self.bitop_inner(&mut m, x, y, &self.xor_ar, 0);
        Ok(self.capped(&m, CapFamily::BitwisePair, v))
    }

    /// Bitwise and.
    pub fn bit_and(&self, x: Val, y: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("and", x)?;
        self.check_operand("and", y)?;
        let mut m = Meter::new();
        let v = self.bitop_inner(&mut m, x, y, &self.and_ar, 0);
        Ok(self.capped(&m, CapFamily::BitwisePair, v))
    }

    /// Bitwise or.
    pub fn bit_or(&self, x: Val, y: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("or", x)?;
        self.check_operand("or", y)?;
        let mut m = Meter::new();
        let v = self.bitop_inner(&mut m, x, y, &self.or_ar, 0);
        Ok(self.capped(&m, CapFamily::BitwisePair, v))
    }
}
