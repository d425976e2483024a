// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Arithmetic operations computable in constant time after a linear-time
//! preprocessing, on a machine whose only arithmetic primitive is addition.
//!
//! A [`PreprocContext`] is built once for a problem size N and holds every
//! lookup table the query operations need. Each query runs in a number of
//! steps depending only on the fixed degree d, the bound factor c, and the
//! branch taken — never on N — and reports that count through [`Metered`].
//!
//! # Step charging
//!
//! Every query and every table build is metered with a uniform rule, one
//! step per primitive event:
//!
//! - an assignment to a variable or an array cell,
//! - a read of an array cell (table lookup),
//! - an equality-or-zero test (comparisons are realized through lookup
//!   tables or digit scans and are charged accordingly),
//! - an addition.
//!
//! Compound procedures charge the sum of their primitives. Where the host
//! integer type stands in for a digit-level routine (multiplication of two
//! degree-d operands, base decomposition), the helper charges the cost the
//! digit-level routine would pay: d² steps per multiplication, a constant
//! per extracted digit.
//!
//! Every public query is finally charged at its family's worst-case budget
//! (see [`query_cap`]): constant-time code on the machine runs each loop to
//! its worst-case trip count and idles through dummy iterations once the
//! answer is known, so the reported step count is a closed-form function of
//! d — identical for every input and every N.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub mod bits;
pub mod build;
pub mod digits;
pub mod divide;
pub mod explog;
pub mod oracle;
pub mod roots;
pub mod serial;

/// Operand type: values are "polynomial" integers below N^d, which for the
/// supported N and d can reach 2^64, so queries compute in u128.
pub type Val = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum ArithError {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is not supported by the root tables at this N")]
    UnsupportedExponent(u64),
    #[error("preprocessing exceeded its linearity budget: {steps} steps > {budget}")]
    BudgetExceeded { steps: u64, budget: u64 },
    #[error("digit vector has width {got}, context is fixed at width {want}")]
    DigitWidthMismatch { got: usize, want: usize },
    #[error("context file is malformed: {0}")]
    Serialization(String),
}

pub type ArithResult<T> = Result<T, ArithError>;

/// A query result paired with the number of charged steps it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metered<T> {
    pub value: T,
    pub steps: u64,
}

impl<T> Metered<T> {
    pub fn new(value: T, steps: u64) -> Self {
        Metered { value, steps }
    }
}

/// Step counter threaded through builds and queries.
#[derive(Debug, Default, Clone)]
pub struct Meter {
    steps: u64,
}

impl Meter {
    pub fn new() -> Self {
        Meter::default()
    }

    #[inline]
    pub fn tick(&mut self) {
        self.steps += 1;
    }

    #[inline]
    pub fn tick_n(&mut self, n: u64) {
        self.steps += n;
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn done<T>(&self, value: T) -> Metered<T> {
        Metered::new(value, self.steps)
    }
}

/// Query families with a fixed worst-case step budget.
///
/// Constant-time procedures are charged as they would execute on the
/// machine: straight-line code with every loop run to its worst-case trip
/// count, idling through dummy iterations once the answer is known. The
/// budget of each family is therefore a closed-form function of the degree
/// d alone — never of N — and a query reports exactly that budget. The
/// debug assertion in [`PreprocContext::capped`] verifies that the work
/// actually performed never exceeds the declared budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapFamily {
    Sum,
    Difference,
    Multiply,
    Divide,
    Division2,
    Exponential,
    Logarithm,
    CthRoot,
    GenRoot,
    BitwisePair,
    Conc,
    Bit,
    Substring,
    Length,
    Fix,
}

/// Worst-case step budget of a query family at degree d.
pub fn query_cap(d: u32, family: CapFamily) -> u64 {
    let d = d as u64;
    let w = (2 * d).max(3); // digit width
    let d4 = d * d * d * d;
    match family {
        CapFamily::Sum | CapFamily::Difference => 16 * w,
        CapFamily::Multiply => 16 * w * w,
        CapFamily::Divide => 96 * d4 + 512 * d * d * d + 1024,
        CapFamily::Division2 => 256 * d * d * d + 256,
        CapFamily::Exponential => 64 * d * d + 128 * d + 256,
        CapFamily::Logarithm => 512 * d4 + 1024,
        CapFamily::CthRoot => 2048 * d4 + 4096,
        CapFamily::GenRoot => 1536 * d4 + 2048,
        CapFamily::BitwisePair => 1280 * d4 + 2048,
        CapFamily::Conc => 640 * d4 + 1024,
        CapFamily::Bit => 768 * d4 + 1024,
        CapFamily::Substring => 1344 * d4 + 2048,
        CapFamily::Length => 576 * d4 + 1024,
        // Prefix/suffix tests: a substring extraction plus a length each.
        CapFamily::Fix => query_cap(d as u32, CapFamily::Substring)
            + 2 * query_cap(d as u32, CapFamily::Length)
            + 64,
    }
}

/// Exponentiation outcome: the power, or a flag that it left the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpOutcome {
    Value(Val),
    Overflow,
}

/// Lookup tables for one fixed exponent of the c-th root operation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CthRootTables {
    /// The fixed exponent this table serves.
    pub c: u32,
    /// Scaling constant K = ⌈N^{1/(2c)}⌉.
    pub k: u64,
    /// Threshold constant c₀ = ⌈√(6c−12)·(c²−1)/(6c)⌉.
    pub c0: u64,
    /// Values below this threshold are answered by the dense table.
    pub m_prime: Val,
    /// True when K < 1+2√c₂, i.e. N is too small for the two-improve
    /// guarantee; the dense table is then enlarged to c·N entries and
    /// queries above it run the bracket-clamped correction.
    pub guard_fallback: bool,
    /// cth_root[x] = ⌊x^{1/c}⌋ for x < m_prime.
    pub table: Vec<u64>,
}

/// All preprocessed state: parameters and lookup tables.
///
/// Built by [`build::build_context`] in time O(N) (metered, with a hard
/// budget), then shared immutably by every query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreprocContext {
    /// Problem size.
    pub n: u64,
    /// Input value bound factor: cells and small operands are ≤ c·N.
    pub c: u64,
    /// Fixed degree: query operands are < N^d.
    pub d: u32,
    /// N^d, the operand bound.
    pub limit: Val,
    /// B = ⌈√N⌉, the digit base.
    pub b: u64,
    /// Digit count used by the base-B digit operations: max(2d, 3), enough
    /// for any value below N^d ≤ B^{2d}.
    pub digits: usize,
    /// K6 = ⌈N^{1/6}⌉ and β = K6³, the small-divisor base.
    pub k6: u64,
    pub beta: u64,
    /// K7 = ⌈N^{1/7}⌉, the base of the direct division algorithm.
    pub k7: u64,
    /// L = ⌊log₂ N⌋.
    pub l_cap: u32,
    /// λ = L/(12⌈log₂L⌉) (0 when L < 2): Newton-regime cap for gen_root.
    pub lambda: u32,
    /// L_{2d} = ⌈2d log₂ N⌉: exponent cap for the EXP table (exponential is
    /// provided at degree 2d because logarithm composes it on N^{2d} values).
    pub l_d: u64,
    /// B_root = max(⌈N^{1/4}⌉³, ⌈N^{1/(d+1)}⌉^d+1): dense root-table extent.
    pub b_root: u64,
    /// Steps charged to each table family during the build.
    pub build_steps: BTreeMap<String, u64>,
    /// Total build steps and the budget they were checked against.
    pub total_build_steps: u64,
    pub build_budget: u64,

    // ---- tables (indices documented on their builders) ----
    pub(crate) pred: Vec<u64>,
    pub(crate) ceil_sqrt: Vec<u64>,
    pub(crate) divb: Vec<u64>,
    pub(crate) modb: Vec<u64>,
    pub(crate) multb: Vec<u64>,
    pub(crate) div_k6: Vec<u64>,
    pub(crate) mod_k6: Vec<u64>,
    pub(crate) div_k7: Vec<u64>,
    pub(crate) mod_k7: Vec<u64>,
    pub(crate) lower_eq: Vec<u8>,
    pub(crate) diff: Vec<u64>,
    pub(crate) mult: Vec<u64>,
    pub(crate) dsm_d: Vec<u64>,
    pub(crate) dsm_r: Vec<u64>,
    pub(crate) dsm_dm: Vec<u64>,
    pub(crate) dsm_rm: Vec<u64>,
    pub(crate) div2: Vec<u64>,
    pub(crate) exp: Vec<Vec<Val>>,
    pub(crate) exp_bound: Vec<u64>,
    pub(crate) log_l: Vec<u64>,
    pub(crate) logar: Vec<u64>,
    pub(crate) cth: Vec<CthRootTables>,
    pub(crate) rootn: Vec<u64>,
    pub(crate) root: Vec<Vec<u64>>,
    pub(crate) factor: Vec<u64>,
    pub(crate) xor_ar: Vec<u64>,
    pub(crate) and_ar: Vec<u64>,
    pub(crate) or_ar: Vec<u64>,
}

impl PreprocContext {
    /// Immediate predecessor: x−1 for x in [1, cN].
    pub fn pred(&self, x: u64) -> ArithResult<Metered<u64>> {
        let mut m = Meter::new();
        m.tick(); // zero test
        if x == 0 {
            return Err(ArithError::Domain {
                op: "pred",
                msg: "0 has no predecessor".into(),
            });
        }
        m.tick(); // bound test
        let v = *self.pred.get(x as usize).ok_or(ArithError::Domain {
            op: "pred",
            msg: format!("{x} exceeds cN = {}", self.c * self.n),
        })?;
        m.tick(); // table lookup
        Ok(m.done(v))
    }

    /// ⌈√x⌉ for x in [1, N].
    pub fn sqrt_ceil(&self, x: u64) -> ArithResult<Metered<u64>> {
        let mut m = Meter::new();
        m.tick();
        if x == 0 || x > self.n {
            return Err(ArithError::Domain {
                op: "sqrt_ceil",
                msg: format!("{x} outside [1, N={}]", self.n),
            });
        }
        m.tick();
        Ok(m.done(self.ceil_sqrt[x as usize]))
    }

    /// Checks an operand against the N^d domain.
    pub(crate) fn check_operand(&self, op: &'static str, x: Val) -> ArithResult<()> {
        if x >= self.limit {
            return Err(ArithError::Domain {
                op,
                msg: format!("{x} is not below N^d = {}", self.limit),
            });
        }
        Ok(())
    }

    /// Charges and performs one multiplication of two degree-d operands,
    /// standing in for the digitwise schoolbook routine.
    #[inline]
    pub(crate) fn mul(&self, m: &mut Meter, a: Val, b: Val) -> Val {
        m.tick_n(self.d as u64 * self.d as u64 + 1);
        a * b
    }

    /// Finalizes a query at its family's worst-case budget (the dummy-run
    /// discipline: the machine executes the full budget regardless of the
    /// data, so the reported count is a function of d alone).
    pub(crate) fn capped<T>(&self, m: &Meter, family: CapFamily, value: T) -> Metered<T> {
        let cap = query_cap(self.d, family);
        debug_assert!(
            m.steps() <= cap,
            "{family:?} overran its worst-case budget: {} > {cap} (d = {})",
            m.steps(),
            self.d
        );
        Metered::new(value, m.steps().max(cap))
    }

    /// Charges and performs a comparison of two degree-d operands, standing
    /// in for the most-significant-digit-first scan.
    #[inline]
    pub(crate) fn le(&self, m: &mut Meter, a: Val, b: Val) -> bool {
        m.tick_n(self.d as u64 + 1);
        a <= b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_context;

    #[test]
    fn context_parameters_match_hand_evaluation() {
        let ctx = build_context(100, 8, 3).expect("build");
        assert_eq!(ctx.b, 10);
        assert_eq!(ctx.k6, 3);
        assert_eq!(ctx.beta, 27);
        assert_eq!(ctx.l_cap, 6);
    }

    #[test]
    fn smallest_context_is_well_formed() {
        let ctx = build_context(2, 8, 3).expect("build");
        assert_eq!(ctx.b, 2);
        assert_eq!(ctx.l_cap, 1);
        assert_eq!(ctx.lambda, 0);
        assert_eq!(ctx.pred(1).unwrap().value, 0);
    }

    #[test]
    fn pred_is_cheap_and_guards_zero() {
        let ctx = build_context(100, 8, 3).expect("build");
        let r = ctx.pred(17).unwrap();
        assert_eq!(r.value, 16);
        assert!(r.steps <= 3);
        assert!(matches!(ctx.pred(0), Err(ArithError::Domain { .. })));
    }

    #[test]
    fn sqrt_ceil_golden() {
        let ctx = build_context(100, 8, 3).expect("build");
        assert_eq!(ctx.sqrt_ceil(17).unwrap().value, 5);
        assert_eq!(ctx.sqrt_ceil(16).unwrap().value, 4);
        assert_eq!(ctx.sqrt_ceil(100).unwrap().value, 10);
        assert!(ctx.sqrt_ceil(0).is_err());
        assert!(ctx.sqrt_ceil(101).is_err());
    }

    #[test]
    fn build_stays_within_budget_and_reports_families() {
        let ctx = build_context(1 << 10, 8, 3).expect("build");
        assert!(ctx.total_build_steps <= ctx.build_budget);
        for family in ["pred", "sqrt", "digits", "division", "explog", "roots", "bitwise"] {
            assert!(
                ctx.build_steps.contains_key(family),
                "missing family {family}"
            );
        }
    }
}
