// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Constant-time division.
//!
//! Three layers: `div_by_small` divides a polynomial integer by a divisor
//! below β = ⌈N^{1/6}⌉³ with one table-driven Horner pass over its base-β
//! digits; `div_close` handles divisors within a factor K6 of the dividend
//! by recursing on right-shifted operands; `divide` reduces the general
//! case to the close case. `division2` is the independent direct algorithm
//! in base K7 = ⌈N^{1/7}⌉ driven by a quotient-prefix table; the two must
//! agree everywhere.

use crate::{ArithError, ArithResult, CapFamily, Meter, Metered, PreprocContext, Val};

impl PreprocContext {
    /// Base-β digit count wide enough for any operand (< N^d ≤ β^{2d}).
    fn beta_width(&self) -> usize {
        (2 * self.d as usize).max(2)
    }

    /// ⌊a/b⌋ and a mod b for 0 < b < β, by Horner evaluation of the base-β
    /// digits of a through the D/R/DM/RM tables.
    pub fn div_by_small(&self, a: Val, b: u64) -> ArithResult<Metered<(Val, u64)>> {
        self.check_operand("div_by_small", a)?;
        let mut m = Meter::new();
        m.tick();
        if b == 0 {
            return Err(ArithError::DivisionByZero);
        }
        if b >= self.beta {
            return Err(ArithError::Domain {
                op: "div_by_small",
                msg: format!("divisor {b} is not below β = {}", self.beta),
            });
        }
        let v = self.dbs(&mut m, a, b);
        Ok(m.done(v))
    }

    pub(crate) fn dbs(&self, m: &mut Meter, a: Val, b: u64) -> (Val, u64) {
        debug_assert!(b >= 1 && b < self.beta);
        let digits = self.nat_digits_base(m, a, self.beta, self.beta_width());
        let mut q: Val = 0;
        let mut r: u64 = 0;
        for &dg in digits.iter().rev() {
            q = q * self.beta as Val
                + self.dsm_d[self.dsm_idx(dg, b)] as Val
                + self.dsm_dm[self.dsm_idx(r, b)] as Val;
            r = self.dsm_r[self.dsm_idx(dg, b)] + self.dsm_rm[self.dsm_idx(r, b)];
            m.tick_n(7); // 4 lookups, shift-add, store, test
            if r >= b {
                q += 1;
                r -= b;
                m.tick_n(2);
            }
        }
        (q, r)
    }

    /// ⌊a/b⌋ for close operands: a/K6 < b.
    fn div_close(&self, m: &mut Meter, a: Val, b: Val) -> Val {
        m.tick();
        if b < self.beta as Val {
            return self.dbs(m, a, b as u64).0;
        }
        // b ≥ β and b > a/K6: shift both operands right by one K6 digit;
        // ⌈b/K6⌉ = ⌊(b−1)/K6⌋+1.
        let a1 = self.dbs(m, a, self.k6).0;
        let b1 = self.dbs(m, b - 1, self.k6).0 + 1;
        m.tick_n(2);
        let q = self.div_close(m, a1, b1);
        let guess = self.mul(m, q + 1, b);
        if self.le(m, guess, a) {
            q + 1
        } else {
            q
        }
    }

    pub(crate) fn divide_inner(&self, m: &mut Meter, a: Val, b: Val) -> Val {
        let shifted = self.mul(m, b, self.k6 as Val);
        if self.le(m, shifted, a) {
            // b ≤ a/K6: peel one K6 digit of the quotient.
            let q = self.k6 as Val * self.divide_inner(m, a, shifted);
            m.tick_n(2);
            let rest = a - self.mul(m, q, b);
            m.tick_n(self.d as u64);
            q + self.div_close(m, rest, b)
        } else {
            self.div_close(m, a, b)
        }
    }

    /// ⌊a/b⌋ for a, b < N^d, b > 0.
    pub fn divide(&self, a: Val, b: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("divide", a)?;
        self.check_operand("divide", b)?;
        let mut m = Meter::new();
        m.tick();
        if b == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let q = self.divide_inner(&mut m, a, b);
        Ok(self.capped(&m, CapFamily::Divide, q))
    }

    /// a mod b = a − b·⌊a/b⌋.
    pub fn modulo(&self, a: Val, b: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("mod", a)?;
        self.check_operand("mod", b)?;
        let mut m = Meter::new();
        m.tick();
        if b == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let q = self.divide_inner(&mut m, a, b);
        let r = a - self.mul(&mut m, q, b);
        m.tick_n(self.d as u64);
        Ok(self.capped(&m, CapFamily::Divide, r))
    }

    // ---- direct division in base K7 ----

    /// Number of base-K7 digits of x ≥ 1 (digit scan, charged per digit).
    fn length_k7(&self, m: &mut Meter, x: Val) -> u32 {
        let mut len = 1u32;
        let mut v = x / self.k7 as Val;
        m.tick_n(2);
        while v > 0 {
            len += 1;
            v /= self.k7 as Val;
            m.tick_n(2);
        }
        len
    }

    /// x div K7^e, charged like the table-backed digit shift.
    fn shift_k7(&self, m: &mut Meter, x: Val, e: u32) -> Val {
        m.tick_n(e as u64 + 1);
        x / crate::oracle::pow_checked(self.k7 as Val, e).expect("K7^e fits")
    }

    fn pow_k7(&self, m: &mut Meter, e: u32) -> Val {
        m.tick_n(e as u64 + 1);
        crate::oracle::pow_checked(self.k7 as Val, e).expect("K7^e fits")
    }

    fn division2_inner(&self, m: &mut Meter, a: Val, b: Val, depth: u32) -> ArithResult<Val> {
        assert!(
            depth <= 7 * self.d + 2,
            "direct division recursed past its depth bound"
        );
        if !self.le(m, b, a) {
            return Ok(0);
        }
        let k2 = (self.k7 * self.k7) as Val;
        m.tick();
        if b < k2 {
            return Ok(self.dbs(m, a, b as u64).0);
        }
        let len_a = self.length_k7(m, a);
        let mut pa = self.shift_k7(m, a, len_a - 3);
        let mut mm = len_a - 3;
        let len_b = self.length_k7(m, b);
        let pb = self.shift_k7(m, b, len_b - 3);
        let nn = len_b - 3;
        m.tick_n(2);
        if len_a == len_b && pa == pb {
            // equal length and equal 3-digit prefix: 1 ≤ a/b < 2
            return Ok(1);
        }
        if pa <= pb {
            pa = self.shift_k7(m, a, len_a - 4);
            mm = len_a - 4;
        }
        let mut q = self.div2_at(pa, pb + 1) as Val;
        m.tick();
        let scale = self.pow_k7(m, mm - nn);
        let bq1 = self.mul(m, b, q + 1);
        let bump = self.mul(m, bq1, scale);
        if self.le(m, bump, a) {
            q += 1;
            m.tick();
        }
        let bq = self.mul(m, b, q);
        let rest = a - self.mul(m, bq, scale);
        m.tick_n(self.d as u64);
        let tail = self.division2_inner(m, rest, b, depth + 1)?;
        m.tick();
        Ok(self.mul(m, q, scale) + tail)
    }

    /// ⌊a/b⌋ by the direct base-K7 algorithm; agrees with [`Self::divide`].
    pub fn division2(&self, a: Val, b: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("division2", a)?;
        self.check_operand("division2", b)?;
        let mut m = Meter::new();
        m.tick();
        if b == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let q = self.division2_inner(&mut m, a, b, 0)?;
        Ok(self.capped(&m, CapFamily::Division2, q))
    }
}

#[cfg(test)]
mod tests {
    use crate::build::build_context;
    use crate::{ArithError, PreprocContext, Val};
    use proptest::prelude::*;

    fn ctx() -> PreprocContext {
        build_context(100, 8, 4).expect("build")
    }

    #[test]
    fn div_by_small_golden() {
        let c = ctx();
        assert_eq!(c.beta, 27);
        let r = c.div_by_small(1000, 7).unwrap().value;
        assert_eq!(r, (142, 6));
    }

    #[test]
    fn divide_golden() {
        let c = ctx();
        assert_eq!(c.divide(1_000_000, 997).unwrap().value, 1003);
        assert_eq!(c.modulo(1_000_000, 997).unwrap().value, 9);
        assert!(matches!(c.divide(5, 0), Err(ArithError::DivisionByZero)));
    }

    #[test]
    fn division2_case2_returns_one() {
        let c = ctx();
        // Same base-K7 length and same 3-digit prefix: quotient is 1.
        let b: Val = 5000;
        let a: Val = 5003;
        assert_eq!(c.division2(a, b).unwrap().value, 1);
    }

    #[test]
    fn divide_steps_do_not_depend_on_n() {
        let small = build_context(1 << 8, 8, 3).expect("build");
        let large = build_context(1 << 14, 8, 3).expect("build");
        let mut max_small = 0;
        let mut max_large = 0;
        for (a, b) in [(12345u64, 17u64), (99991, 321), (65535, 2), (40000, 39999)] {
            max_small = max_small.max(small.divide(a as Val, b as Val).unwrap().steps);
            max_large = max_large.max(large.divide(a as Val, b as Val).unwrap().steps);
        }
        assert!(
            max_large <= max_small,
            "steps grew with N: {max_large} > {max_small}"
        );
    }

    proptest! {
        #[test]
        fn divide_matches_oracle(a in 0u64..100_000_000, b in 1u64..100_000_000) {
            let c = ctx();
            prop_assert_eq!(c.divide(a as Val, b as Val).unwrap().value, (a / b) as Val);
        }

        #[test]
        fn modulo_is_consistent(a in 0u64..100_000_000, b in 1u64..100_000_000) {
            let c = ctx();
            let q = c.divide(a as Val, b as Val).unwrap().value;
            let r = c.modulo(a as Val, b as Val).unwrap().value;
            prop_assert!(r < b as Val);
            prop_assert_eq!(b as Val * q + r, a as Val);
        }

        #[test]
        fn division2_agrees_with_divide(a in 0u64..100_000_000, b in 1u64..100_000_000) {
            let c = ctx();
            prop_assert_eq!(
                c.division2(a as Val, b as Val).unwrap().value,
                c.divide(a as Val, b as Val).unwrap().value
            );
        }

        #[test]
        fn div_by_small_matches_oracle(a in 0u64..100_000_000, b in 1u64..26) {
            let c = ctx();
            let (q, r) = c.div_by_small(a as Val, b as u64).unwrap().value;
            prop_assert_eq!(q, (a / b) as Val);
            prop_assert_eq!(r as u64, a % b);
        }
    }
}
