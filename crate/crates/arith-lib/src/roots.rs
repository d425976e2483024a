// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Integer roots: the fixed-exponent c-th root and the general (x, y) root.
//!
//! Both follow the same scheme: answer small arguments from a dense table,
//! otherwise divide the argument by K^c to recurse on a smaller value,
//! rescale that root by K, and repair the approximation with two discrete
//! Newton steps. The Newton iterates are clamped into the bracket
//! [t·K, (t+1)·K), which provably contains the answer, so the final
//! correction walk is bounded by the bracket width; this clamp is what
//! keeps the procedure total on context sizes too small for the analytic
//! two-step guarantee (flagged as `guard_fallback` on the table).

use crate::{oracle, ArithError, ArithResult, CapFamily, Meter, Metered, PreprocContext, Val};

/// Correction-walk safety cap; the walk is mathematically bounded by the
/// bracket width, this only guards against implementation bugs.
const WALK_CAP: u64 = 1 << 20;

impl PreprocContext {
    /// g^e, treating overflow as "larger than any operand".
    fn pow_or_max(&self, m: &mut Meter, g: Val, e: u32) -> Val {
        m.tick_n(e as u64 * (self.d as u64 * self.d as u64 + 1));
        oracle::pow_checked(g, e).unwrap_or(Val::MAX)
    }

    /// One discrete Newton step for the e-th root, clamped into [lo, hi].
    fn improve(&self, m: &mut Meter, g: Val, x: Val, e: u32, lo: Val, hi: Val) -> Val {
        let ge = self.pow_or_max(m, g, e);
        let ge1 = self.pow_or_max(m, g + 1, e);
        m.tick_n(2);
        if ge <= x && x < ge1 {
            return g;
        }
        // Newton step ⌊(⌊x/g^{e−1}⌋ + (e−1)·g)/e⌋; this split form keeps
        // every intermediate below N^d (unlike (x+(e−1)g^e)/(e·g^{e−1})),
        // and its off-by-one versus the fused form is absorbed by the
        // clamp and the correction walk.
        let gem1 = self.pow_or_max(m, g, e - 1);
        let t1 = self.divide_inner(m, x, gem1);
        m.tick_n(2);
        let num = t1 + (e as Val - 1) * g;
        let next = self.dbs(m, num, e as u64).0;
        next.clamp(lo, hi)
    }

    /// Walks a clamped Newton result to the exact floored root.
    fn correct(&self, m: &mut Meter, mut g: Val, x: Val, e: u32, lo: Val) -> Val {
        let mut walked = 0u64;
        while g > lo && self.pow_or_max(m, g, e) > x {
            g -= 1;
            m.tick();
            walked += 1;
            assert!(walked < WALK_CAP, "root correction walk diverged");
        }
        while self.pow_or_max(m, g + 1, e) <= x {
            g += 1;
            m.tick();
            walked += 1;
            assert!(walked < WALK_CAP, "root correction walk diverged");
        }
        g
    }

    /// Shared recursive scheme: dense table below `table_len`, then divide
    /// by K^e, recurse, rescale, improve twice, correct within the bracket.
    fn root_recurse(
        &self,
        m: &mut Meter,
        x: Val,
        e: u32,
        k: u64,
        depth: u32,
        lookup: &dyn Fn(&mut Meter, Val) -> Option<Val>,
    ) -> Val {
        assert!(
            depth <= 3 * self.d + 3,
            "root recursion exceeded its depth bound"
        );
        if let Some(v) = lookup(m, x) {
            return v;
        }
        let ke = self.pow_or_max(m, k as Val, e);
        let s = self.divide_inner(m, x, ke);
        let t = self.root_recurse(m, s, e, k, depth + 1, lookup);
        let lo = t * k as Val;
        let hi = lo + k as Val - 1; // the root lies in [t·K, (t+1)·K)
        m.tick_n(3);
        if lo == 0 {
            // x below K^e: the root is under K, reach it by walking up.
            return self.correct(m, 0, x, e, 0);
        }
        let g1 = self.improve(m, lo, x, e, lo, hi);
        let g2 = self.improve(m, g1, x, e, lo, hi);
        self.correct(m, g2, x, e, lo)
    }

    /// ⌊x^{1/c}⌋ for one of the exponents fixed at build time.
    pub fn cth_root(&self, x: Val, ce: u32) -> ArithResult<Metered<Val>> {
        self.check_operand("cth_root", x)?;
        let t = self.cth_tables(ce)?;
        let mut m = Meter::new();
        let table = &t.table;
        let k = t.k;
        let v = self.root_recurse(&mut m, x, ce, k, 0, &|m: &mut Meter, x: Val| {
            m.tick();
            if (x as usize) < table.len() {
                m.tick();
                Some(table[x as usize] as Val)
            } else {
                None
            }
        });
        Ok(self.capped(&m, CapFamily::CthRoot, v))
    }

    /// Bisection for y > L, where the root is below 2^d: at most d halvings,
    /// each decided through the logarithm (z^y > x ⟺ y > ⌊log_z x⌋).
    fn root_bisect(&self, m: &mut Meter, x: Val, y: Val) -> Val {
        let mut r: Val = 0;
        let mut u: Val = oracle::pow_checked(2, self.d).expect("2^d fits");
        m.tick_n(2);
        while u - r > 1 {
            let z = (r + u) / 2;
            m.tick_n(3);
            let above = if z < 2 {
                x == 0
            } else {
                let lg = self.log_inner(m, z, x.max(1), 0);
                m.tick();
                x == 0 || y > lg
            };
            if above {
                u = z;
            } else {
                r = z;
            }
        }
        r
    }

    /// ⌊x^{1/y}⌋ for x < N^d, y ≥ 1.
    ///
    /// Regimes: y > L by bisection; y ≤ L answered from the dense root
    /// table when x < B_root, else by the Newton scheme keyed on RootN[y].
    /// When λ ≥ 2 the Newton scheme is reserved for y < λ and exponents in
    /// [λ, L] go through the factor table, failing with
    /// UnsupportedExponent on the forbidden form; for λ < 2 (every
    /// practical N) all y ≤ L use table + Newton directly.
    pub fn gen_root(&self, x: Val, y: Val) -> ArithResult<Metered<Val>> {
        self.check_operand("gen_root", x)?;
        let mut m = Meter::new();
        m.tick();
        if y == 0 {
            return Err(ArithError::Domain {
                op: "gen_root",
                msg: "exponent must be at least 1".into(),
            });
        }
        m.tick();
        if y == 1 {
            return Ok(self.capped(&m, CapFamily::GenRoot, x));
        }
        m.tick();
        if y > self.l_cap as Val {
            let v = self.root_bisect(&mut m, x, y);
            return Ok(self.capped(&m, CapFamily::GenRoot, v));
        }
        let yy = y as u32;
        m.tick();
        if self.lambda >= 2 && yy >= self.lambda {
            // factor-table composition ⌊x^{1/(y1·y2)}⌋ = ⌊⌊x^{1/y1}⌋^{1/y2}⌋
            let y1 = self.factor[(yy - self.lambda) as usize];
            m.tick_n(2);
            if y1 == 0 {
                return Err(ArithError::UnsupportedExponent(y as u64));
            }
            let y2 = yy / y1 as u32;
            let z = self.root_newton(&mut m, x, y1 as u32);
            m.tick();
            let v = self.root[y2 as usize][z as usize] as Val;
            return Ok(self.capped(&m, CapFamily::GenRoot, v));
        }
        let v = self.root_newton(&mut m, x, yy);
        Ok(self.capped(&m, CapFamily::GenRoot, v))
    }

    fn root_newton(&self, m: &mut Meter, x: Val, y: u32) -> Val {
        let k = self.rootn[y as usize];
        let row = &self.root[y as usize];
        let b_root = self.b_root;
        self.root_recurse(m, x, y, k, 0, &|m: &mut Meter, x: Val| {
            m.tick();
            if x < b_root as Val {
                m.tick();
                Some(row[x as usize] as Val)
            } else {
                None
            }
        })
    }
}
