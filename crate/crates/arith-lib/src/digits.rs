// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Digit-level arithmetic in base B = ⌈√N⌉.
//!
//! Operands are little-endian digit vectors of the fixed width
//! `PreprocContext::digits` (2d digits cover every value below N^d, with a
//! floor of 3). Sum, difference and product are computed digit by digit
//! through the precomputed DIVB/MODB, LowerEQ, DIFF and MULT tables, so a
//! query costs a number of steps depending only on the width.

use crate::{ArithError, ArithResult, CapFamily, Meter, Metered, PreprocContext, Val};

impl PreprocContext {
    fn check_width(&self, got: usize) -> ArithResult<()> {
        if got != self.digits {
            return Err(ArithError::DigitWidthMismatch {
                got,
                want: self.digits,
            });
        }
        Ok(())
    }

    /// Base-B digits of x (x ≤ cN), via the DIVB/MODB tables.
    pub fn to_base_b(&self, x: u64) -> ArithResult<Metered<Vec<u64>>> {
        let mut m = Meter::new();
        if x > self.c * self.n {
            return Err(ArithError::Domain {
                op: "to_base_b",
                msg: format!("{x} exceeds cN = {}", self.c * self.n),
            });
        }
        let mut out = vec![0u64; self.digits];
        let mut v = x as usize;
        for slot in out.iter_mut() {
            *slot = self.modb[v];
            v = self.divb[v] as usize;
            m.tick_n(3); // two lookups, one store
        }
        Ok(m.done(out))
    }

    /// Value of a digit vector (Horner).
    pub fn from_base_b(&self, digits: &[u64]) -> ArithResult<Metered<Val>> {
        let mut m = Meter::new();
        self.check_width(digits.len())?;
        let v = self.digits_val(&mut m, digits);
        Ok(m.done(v))
    }

    /// Reduces a digit vector whose entries may exceed B−1 (but not cN) to
    /// canonical form, dropping the final carry (i.e. mod B^width).
    pub fn normalize(&self, raw: &[u64]) -> ArithResult<Metered<Vec<u64>>> {
        let mut m = Meter::new();
        self.check_width(raw.len())?;
        let (out, _) = self.normalize_inner(&mut m, raw, "normalize")?;
        Ok(m.done(out))
    }

    pub(crate) fn normalize_inner(
        &self,
        m: &mut Meter,
        raw: &[u64],
        op: &'static str,
    ) -> ArithResult<(Vec<u64>, u64)> {
        let cn = self.c * self.n;
        let mut out = vec![0u64; raw.len()];
        let mut carry = 0u64;
        for (i, &x) in raw.iter().enumerate() {
            let temp = x + carry;
            m.tick_n(3); // add, two lookups
            if temp > cn {
                return Err(ArithError::Domain {
                    op,
                    msg: format!("intermediate digit {temp} exceeds cN (needs larger c)"),
                });
            }
            carry = self.divb[temp as usize];
            out[i] = self.modb[temp as usize];
        }
        Ok((out, carry))
    }

    /// 1 iff a ≤ b, scanning from the most significant digit.
    pub fn lower_equal(&self, a: &[u64], b: &[u64]) -> ArithResult<Metered<bool>> {
        let mut m = Meter::new();
        self.check_width(a.len())?;
        self.check_width(b.len())?;
        for i in (0..self.digits).rev() {
            m.tick(); // equality test
            if a[i] != b[i] {
                m.tick(); // LowerEQ lookup
                return Ok(m.done(self.lower_eq_at(a[i], b[i]) == 1));
            }
        }
        Ok(m.done(true))
    }

    /// Digitwise sum, reduced mod B^width; the second component is the
    /// carry out of the most significant digit.
    pub fn sum_digits(&self, a: &[u64], b: &[u64]) -> ArithResult<Metered<(Vec<u64>, bool)>> {
        let mut m = Meter::new();
        self.check_width(a.len())?;
        self.check_width(b.len())?;
        let raw: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        m.tick_n(self.digits as u64);
        let (out, carry) = self.normalize_inner(&mut m, &raw, "sum")?;
        Ok(m.done((out, carry != 0)))
    }

    /// Digitwise difference a−b mod B^width; the second component reports
    /// whether a borrow left the most significant digit (i.e. a < b).
    pub fn difference_digits(
        &self,
        a: &[u64],
        b: &[u64],
    ) -> ArithResult<Metered<(Vec<u64>, bool)>> {
        let mut m = Meter::new();
        self.check_width(a.len())?;
        self.check_width(b.len())?;
        let mut out = vec![0u64; self.digits];
        let mut carry = 0u64;
        for i in 0..self.digits {
            let cc = b[i] + carry;
            m.tick_n(2); // add, comparison lookup
            // cc can equal B (digit B−1 plus borrow), which never fits
            // under a[i] < B.
            if cc < self.b && self.lower_eq_at(cc, a[i]) == 1 {
                out[i] = self.diff_at(a[i], cc);
                carry = 0;
            } else {
                out[i] = self.diff_at(a[i] + self.b, cc);
                carry = 1;
            }
            m.tick_n(2); // DIFF lookup, store
        }
        Ok(m.done((out, carry != 0)))
    }

    /// Schoolbook product mod B^width via the MULT digit table. Requires a
    /// bound factor c large enough that accumulated columns stay ≤ cN.
    pub fn multiply_digits(&self, a: &[u64], b: &[u64]) -> ArithResult<Metered<Vec<u64>>> {
        let mut m = Meter::new();
        self.check_width(a.len())?;
        self.check_width(b.len())?;
        let mut acc = vec![0u64; self.digits];
        for i in 0..self.digits {
            for j in 0..self.digits - i {
                acc[i + j] += self.mult_at(a[i], b[j]);
                m.tick_n(2); // lookup, add-assign
            }
        }
        let (out, _) = self.normalize_inner(&mut m, &acc, "multiply")?;
        Ok(m.done(out))
    }

    /// Sum of two plain naturals below N^d, reduced mod B^width, with the
    /// carry-out flag.
    pub fn sum(&self, a: Val, b: Val) -> ArithResult<Metered<(Val, bool)>> {
        self.check_operand("sum", a)?;
        self.check_operand("sum", b)?;
        let mut m = Meter::new();
        let da = self.nat_digits(&mut m, a);
        let db = self.nat_digits(&mut m, b);
        let r = self.sum_digits(&da, &db)?;
        m.tick_n(r.steps);
        let v = self.digits_val(&mut m, &r.value.0);
        Ok(self.capped(&m, CapFamily::Sum, (v, r.value.1)))
    }

    /// Difference of two plain naturals mod B^width, with the borrow flag.
    pub fn difference(&self, a: Val, b: Val) -> ArithResult<Metered<(Val, bool)>> {
        self.check_operand("difference", a)?;
        self.check_operand("difference", b)?;
        let mut m = Meter::new();
        let da = self.nat_digits(&mut m, a);
        let db = self.nat_digits(&mut m, b);
        let r = self.difference_digits(&da, &db)?;
        m.tick_n(r.steps);
        let v = self.digits_val(&mut m, &r.value.0);
        Ok(self.capped(&m, CapFamily::Difference, (v, r.value.1)))
    }

    /// Product of two plain naturals mod B^width.
    pub fn multiply(&self, a: Val, b: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("multiply", a)?;
        self.check_operand("multiply", b)?;
        let mut m = Meter::new();
        let da = self.nat_digits(&mut m, a);
        let db = self.nat_digits(&mut m, b);
        let r = self.multiply_digits(&da, &db)?;
        m.tick_n(r.steps);
        let v = self.digits_val(&mut m, &r.value);
        Ok(self.capped(&m, CapFamily::Multiply, v))
    }

    /// Wrap modulus of the digit operations: B^width.
    pub fn digit_modulus(&self) -> Val {
        crate::oracle::pow_checked(self.b as Val, self.digits as u32).expect("B^width fits")
    }

    /// Metered base-B decomposition prelude for a full-size operand.
    pub(crate) fn nat_digits(&self, m: &mut Meter, x: Val) -> Vec<u64> {
        self.nat_digits_base(m, x, self.b, self.digits)
    }

    /// Metered decomposition in an arbitrary small base, constant steps per
    /// digit (stands in for the precomputed div/mod tables of that base).
    pub(crate) fn nat_digits_base(
        &self,
        m: &mut Meter,
        mut x: Val,
        base: u64,
        count: usize,
    ) -> Vec<u64> {
        let mut out = vec![0u64; count];
        for slot in out.iter_mut() {
            *slot = (x % base as Val) as u64;
            x /= base as Val;
            m.tick_n(3);
        }
        out
    }

    /// Metered Horner recomposition.
    pub(crate) fn digits_val(&self, m: &mut Meter, digits: &[u64]) -> Val {
        self.digits_val_base(m, digits, self.b)
    }

    pub(crate) fn digits_val_base(&self, m: &mut Meter, digits: &[u64], base: u64) -> Val {
        let mut v: Val = 0;
        for &dg in digits.iter().rev() {
            v = v * base as Val + dg as Val;
            m.tick_n(2);
        }
        v
    }
}
