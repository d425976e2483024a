// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Oracle checking: compares operation results against exact integer
//! arithmetic, either over the full (small-N) domain or on seeded random
//! samples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ops::{build_op_context, OpContext, OpName, Outcome};
use crate::HarnessResult;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum OracleMode {
    Exhaustive,
    Random { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    pub op_name: String,
    pub n: u64,
    pub c: u64,
    pub d: u32,
    pub mode: OracleMode,
    pub checked: u64,
    pub mismatches: u64,
    pub skipped: u64,
    pub first_mismatch: Option<String>,
}

impl OracleReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches == 0
    }
}

/// Checks `op` against the oracle on a freshly built context.
pub fn oracle_check(
    op: OpName,
    n: u64,
    c: u64,
    d: u32,
    mode: OracleMode,
) -> HarnessResult<OracleReport> {
    let ctx = build_op_context(op, n, c, d)?;
    oracle_check_ctx(op, &ctx, n, c, d, mode)
}

/// Checks `op` against the oracle on a caller-provided context (so a
/// deliberately corrupted context can be shown to produce mismatches).
pub fn oracle_check_ctx(
    op: OpName,
    ctx: &OpContext,
    n: u64,
    c: u64,
    d: u32,
    mode: OracleMode,
) -> HarnessResult<OracleReport> {
    let mut report = OracleReport {
        op_name: op.name().to_string(),
        n,
        c,
        d,
        mode,
        checked: 0,
        mismatches: 0,
        skipped: 0,
        first_mismatch: None,
    };
    let tally = |report: &mut OracleReport, outcome: Outcome| match outcome {
        Outcome::Match { .. } => report.checked += 1,
        Outcome::Skip => report.skipped += 1,
        Outcome::Mismatch { detail } => {
            report.checked += 1;
            report.mismatches += 1;
            report.first_mismatch.get_or_insert(detail);
        }
    };
    match mode {
        OracleMode::Exhaustive => {
            let mut visit = |args: &[u128]| tally(&mut report, op.check_one(ctx, args));
            op.for_each_exhaustive(ctx, &mut visit)?;
        }
        OracleMode::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                match op.sample(ctx, &mut rng) {
                    Some(args) => tally(&mut report, op.check_one(ctx, &args)),
                    None => report.skipped += 1,
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_xor_at_tiny_n_is_clean() {
        let r = oracle_check(OpName::Xor, 4, 8, 2, OracleMode::Exhaustive).unwrap();
        assert!(r.is_ok());
        assert_eq!(r.checked, 16 * 16);
    }

    #[test]
    fn random_divide_is_clean_and_seed_stable() {
        let mode = OracleMode::Random {
            samples: 200,
            seed: 3,
        };
        let a = oracle_check(OpName::Divide, 128, 8, 2, mode).unwrap();
        let b = oracle_check(OpName::Divide, 128, 8, 2, mode).unwrap();
        assert!(a.is_ok());
        assert_eq!(a.checked, b.checked);
    }

    #[test]
    fn corrupted_table_yields_mismatches() {
        // Round-trip the context through JSON and poke an off-by-one into
        // every DIFF table entry; the difference oracle must now disagree.
        let OpContext::Arith(ctx) = build_op_context(OpName::Difference, 64, 8, 2).unwrap()
        else {
            unreachable!()
        };
        let mut v: serde_json::Value = serde_json::from_str(&ctx.to_json().unwrap()).unwrap();
        let diff = v["context"]["diff"].as_array_mut().expect("diff table");
        for entry in diff.iter_mut() {
            let old = entry.as_u64().unwrap();
            *entry = (old + 1).into();
        }
        let tampered =
            arith_lib::PreprocContext::from_json(&serde_json::to_string(&v).unwrap()).unwrap();
        let r = oracle_check_ctx(
            OpName::Difference,
            &OpContext::Arith(tampered),
            64,
            8,
            2,
            OracleMode::Exhaustive,
        )
        .unwrap();
        assert!(r.mismatches > 0, "tampering must be visible: {r:?}");
    }
}
