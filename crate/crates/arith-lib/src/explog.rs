// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Exponential and logarithm.
//!
//! The EXP table holds all powers x^y below N^{2d} for 2 ≤ x < B: the
//! larger degree is needed because the logarithm compares powers against
//! products as large as x·y < N^{2d}. Queries with a small exponent
//! (y < twice the degree) run a short multiplication loop instead; any
//! other combination provably overflows.

use crate::{ArithError, ArithResult, CapFamily, ExpOutcome, Meter, Metered, PreprocContext, Val};

impl PreprocContext {
    /// x^y against an arbitrary power-of-N limit; `loop_cap` is twice the
    /// degree that limit corresponds to.
    pub(crate) fn exp_general(
        &self,
        m: &mut Meter,
        x: Val,
        y: Val,
        limit: Val,
        loop_cap: u64,
    ) -> ExpOutcome {
        m.tick();
        if x == 1 || y == 0 {
            return ExpOutcome::Value(1);
        }
        m.tick();
        if x == 0 {
            return ExpOutcome::Value(0);
        }
        m.tick();
        if y < loop_cap as Val {
            let mut z: Val = 1;
            for _ in 0..y {
                z = self.mul(m, z, x);
                m.tick();
                if z >= limit {
                    return ExpOutcome::Overflow;
                }
            }
            return ExpOutcome::Value(z);
        }
        // y ≥ loop_cap and x^y < limit would force x < B: anything else
        // overflows, as does an exponent beyond the table for this x.
        m.tick_n(2);
        if x < self.b as Val && y <= self.exp_bound[x as usize] as Val {
            let v = self.exp[x as usize][y as usize - 1];
            m.tick_n(2);
            if v < limit {
                return ExpOutcome::Value(v);
            }
        }
        ExpOutcome::Overflow
    }

    /// x^y if it is below N^d, else the overflow marker.
    pub fn exponential(&self, x: Val, y: Val) -> ArithResult<Metered<ExpOutcome>> {
        self.check_operand("exponential", x)?;
        self.check_operand("exponential", y)?;
        let mut m = Meter::new();
        let v = self.exp_general(&mut m, x, y, self.limit, 2 * self.d as u64);
        Ok(self.capped(&m, CapFamily::Exponential, v))
    }

    /// Degree-2d exponential used internally by the logarithm.
    fn exp2(&self, m: &mut Meter, x: Val, y: Val) -> ExpOutcome {
        let limit2 = self.limit * self.limit;
        self.exp_general(m, x, y, limit2, 4 * self.d as u64)
    }

    /// ⌈log_x B⌉, from the table for x ≤ B, and 1 beyond it.
    fn l_of(&self, m: &mut Meter, x: Val) -> Val {
        m.tick();
        if x <= self.b as Val {
            m.tick();
            self.log_l[x as usize] as Val
        } else {
            1
        }
    }

    pub(crate) fn log_inner(&self, m: &mut Meter, x: Val, y: Val, depth: u32) -> Val {
        assert!(
            depth <= 4 * self.d + 4,
            "logarithm recursed past its depth bound"
        );
        m.tick();
        if y < x {
            return 0; // case 1
        }
        m.tick();
        if y < 2 * self.b as Val {
            m.tick();
            return self.logar_at(x, y) as Val; // case 2
        }
        let l = self.l_of(m, x);
        let exl = match self.exp2(m, x, l) {
            ExpOutcome::Value(v) => v,
            ExpOutcome::Overflow => unreachable!("x^{{⌈log_x B⌉}} ≤ xB < N^{{2d}}"),
        };
        m.tick();
        if y < 2 * exl {
            // case 3: y/x < 2B, one recursion into a base case
            let shifted = self.divide_inner(m, y, x);
            return self.log_inner(m, x, shifted, depth + 1) + 1;
        }
        // case 4: strip L[x] factors of x, then disambiguate
        let shifted = self.divide_inner(m, y, exl);
        let s = self.log_inner(m, x, shifted, depth + 1) + l;
        m.tick_n(2);
        match self.exp2(m, x, s + 1) {
            ExpOutcome::Value(v) if v <= y => s + 1,
            _ => s, // x^{s+1} > y (an overflow certainly exceeds y)
        }
    }

    /// ⌊log_x y⌋ for 2 ≤ x < N^d and 1 ≤ y < N^d.
    pub fn logarithm(&self, x: Val, y: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("logarithm", x)?;
        self.check_operand("logarithm", y)?;
        if x < 2 {
            return Err(ArithError::Domain {
                op: "logarithm",
                msg: format!("base {x} must be at least 2"),
            });
        }
        if y < 1 {
            return Err(ArithError::Domain {
                op: "logarithm",
                msg: "argument must be at least 1".into(),
            });
        }
        let mut m = Meter::new();
        let v = self.log_inner(&mut m, x, y, 0);
        Ok(self.capped(&m, CapFamily::Logarithm, v))
    }
}
