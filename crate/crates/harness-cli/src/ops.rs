// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! The operation registry: every query operation the harness can build,
//! sample, run, and compare against an exact-integer oracle.
//!
//! Each operation documents its random-sample domain here:
//!
//! - `sum`, `difference`, `multiply`, `xor`, `and`, `or`, `exponential`:
//!   both operands uniform in [0, N^d).
//! - `divide`, `mod`, `division2`: dividend uniform in [0, N^d), divisor
//!   uniform in [1, N^d).
//! - `logarithm`: base uniform in [2, N^d), argument uniform in [1, N^d).
//! - `cth_root2`, `cth_root3`, `length`: operand uniform in [0, N^d).
//! - `gen_root`: radicand uniform in [0, N^d); the exponent is drawn from
//!   the fixed set {1, 2, 3, 4, 5, 2^20} (clamped below N^d) so both the
//!   table/Newton regime (small y) and the bisection regime (y > L) are
//!   exercised at every N of a sweep.
//! - `conc`: operands resampled (up to 64 tries) until the concatenation
//!   fits below N^d; a failure to find a fitting pair counts as a skip.
//! - `bit`: value uniform in [0, N^d), index uniform in [0, 2L') where
//!   L' is the bit length of N^d.
//! - `substring`: value uniform in [0, N^d), both indices uniform in
//!   [0, L'+2]; indices beyond the value's length behave uniformly.
//! - `ca_*`: operand uniform in [0, N^d), evaluated through the block
//!   tables of the corresponding demo automaton.

use arith_lib::{oracle, ArithError, ExpOutcome, Metered, PreprocContext, Val};
use ca_compile::{build_ca_tables, CaTables};
use rand::Rng;

use crate::{HarnessError, HarnessResult};

/// Sentinel encoding of the exponential overflow outcome, chosen outside
/// every operand domain (values are < N^d ≤ 2^120).
pub const OVERFLOW_SENTINEL: Val = Val::MAX;

/// Every operation the harness knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpName {
    Sum,
    Difference,
    Multiply,
    Divide,
    Mod,
    Division2,
    Exponential,
    Logarithm,
    CthRoot2,
    CthRoot3,
    GenRoot,
    Xor,
    And,
    Or,
    Conc,
    Bit,
    Substring,
    Length,
    CaIdentity,
    CaComplement,
    CaParity,
}

impl OpName {
    pub const ALL: [OpName; 21] = [
        OpName::Sum,
        OpName::Difference,
        OpName::Multiply,
        OpName::Divide,
        OpName::Mod,
        OpName::Division2,
        OpName::Exponential,
        OpName::Logarithm,
        OpName::CthRoot2,
        OpName::CthRoot3,
        OpName::GenRoot,
        OpName::Xor,
        OpName::And,
        OpName::Or,
        OpName::Conc,
        OpName::Bit,
        OpName::Substring,
        OpName::Length,
        OpName::CaIdentity,
        OpName::CaComplement,
        OpName::CaParity,
    ];

    pub fn parse(s: &str) -> HarnessResult<OpName> {
        OpName::ALL
            .iter()
            .copied()
            .find(|op| op.name() == s)
            .ok_or_else(|| HarnessError::UnknownOp(s.to_string()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            OpName::Sum => "sum",
            OpName::Difference => "difference",
            OpName::Multiply => "multiply",
            OpName::Divide => "divide",
            OpName::Mod => "mod",
            OpName::Division2 => "division2",
            OpName::Exponential => "exponential",
            OpName::Logarithm => "logarithm",
            OpName::CthRoot2 => "cth_root2",
            OpName::CthRoot3 => "cth_root3",
            OpName::GenRoot => "gen_root",
            OpName::Xor => "xor",
            OpName::And => "and",
            OpName::Or => "or",
            OpName::Conc => "conc",
            OpName::Bit => "bit",
            OpName::Substring => "substring",
            OpName::Length => "length",
            OpName::CaIdentity => "ca_identity",
            OpName::CaComplement => "ca_complement",
            OpName::CaParity => "ca_parity",
        }
    }

    pub fn is_ca(&self) -> bool {
        matches!(
            self,
            OpName::CaIdentity | OpName::CaComplement | OpName::CaParity
        )
    }
}

impl std::fmt::Display for OpName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Preprocessed state for one operation at one problem size.
pub enum OpContext {
    Arith(PreprocContext),
    Ca(CaTables),
}

impl OpContext {
    pub fn limit(&self) -> Val {
        match self {
            OpContext::Arith(c) => c.limit,
            OpContext::Ca(t) => t.limit,
        }
    }

    pub fn preproc_steps(&self) -> u64 {
        match self {
            OpContext::Arith(c) => c.total_build_steps,
            OpContext::Ca(t) => t.total_build_steps,
        }
    }
}

/// Builds the preprocessing context the operation queries against.
pub fn build_op_context(op: OpName, n: u64, c: u64, d: u32) -> HarnessResult<OpContext> {
    Ok(match op {
        OpName::CaIdentity => OpContext::Ca(build_ca_tables(&ca_compile::demos::identity_ca(), n, d)?),
        OpName::CaComplement => {
            OpContext::Ca(build_ca_tables(&ca_compile::demos::complement_ca(), n, d)?)
        }
        OpName::CaParity => OpContext::Ca(build_ca_tables(&ca_compile::demos::parity_ca(), n, d)?),
        _ => OpContext::Arith(arith_lib::build::build_context(n, c, d)?),
    })
}

/// Outcome of one checked query.
pub enum Outcome {
    /// Result agrees with the oracle; carries the metered step count.
    Match { steps: u64 },
    /// Arguments outside the operation's supported regime at this N.
    Skip,
    /// Result disagrees with the oracle.
    Mismatch { detail: String },
}

/// The concatenation domain: both the result and the shift factor
/// 2^length(y) must stay below N^d (the shift is computed in-domain).
fn conc_fits(x: Val, y: Val, limit: Val) -> bool {
    let ly = oracle::bit_length(y);
    ly < 120 && (1u128 << ly) < limit && oracle::conc(x, y) < limit
}

fn ctx_of<'a>(op: OpName, ctx: &'a OpContext) -> Option<&'a PreprocContext> {
    match (op.is_ca(), ctx) {
        (false, OpContext::Arith(c)) => Some(c),
        _ => None,
    }
}

impl OpName {
    /// Draws in-domain arguments (see the module docs for the per-op
    /// domains); `None` means no in-domain sample was found.
    pub fn sample(&self, ctx: &OpContext, rng: &mut impl Rng) -> Option<Vec<Val>> {
        let limit = ctx.limit();
        Some(match self {
            OpName::Sum
            | OpName::Difference
            | OpName::Multiply
            | OpName::Xor
            | OpName::And
            | OpName::Or
            | OpName::Exponential => {
                vec![rng.gen_range(0..limit), rng.gen_range(0..limit)]
            }
            OpName::Divide | OpName::Mod | OpName::Division2 => {
                vec![rng.gen_range(0..limit), rng.gen_range(1..limit)]
            }
            OpName::Logarithm => vec![rng.gen_range(2..limit), rng.gen_range(1..limit)],
            OpName::CthRoot2 | OpName::CthRoot3 | OpName::Length => vec![rng.gen_range(0..limit)],
            OpName::GenRoot => {
                const Y_SET: [Val; 6] = [1, 2, 3, 4, 5, 1 << 20];
                let y = Y_SET[rng.gen_range(0..Y_SET.len())].min(limit - 1).max(1);
                vec![rng.gen_range(0..limit), y]
            }
            OpName::Conc => {
                // Split the available bit budget between the two operands so
                // concatenations fit at every degree.
                let lb = (oracle::bit_length(limit) - 1) as u32;
                for _ in 0..64 {
                    let ky = rng.gen_range(0..lb);
                    let y = rng.gen_range(0..(1u128 << (ky + 1))).min(limit - 1);
                    let x = rng.gen_range(0..(limit >> oracle::bit_length(y)).max(1));
                    if conc_fits(x, y, limit) {
                        return Some(vec![x, y]);
                    }
                }
                return None;
            }
            OpName::Bit => {
                let lp = oracle::bit_length(limit);
                vec![rng.gen_range(0..limit), rng.gen_range(0..2 * lp)]
            }
            OpName::Substring => {
                let lp = oracle::bit_length(limit);
                vec![
                    rng.gen_range(0..limit),
                    rng.gen_range(0..=lp + 2),
                    rng.gen_range(0..=lp + 2),
                ]
            }
            OpName::CaIdentity | OpName::CaComplement | OpName::CaParity => {
                vec![rng.gen_range(0..limit)]
            }
        })
    }

    /// Exact-integer oracle; `None` means the arguments are outside the
    /// operation's domain and the query must fail.
    pub fn expected(&self, ctx: &OpContext, args: &[Val]) -> Option<Val> {
        let limit = ctx.limit();
        if args.iter().any(|&a| a >= limit) {
            return None;
        }
        let modm = ctx_of(*self, ctx).map(|c| c.digit_modulus());
        match self {
            OpName::Sum => {
                let modm = modm?;
                let s = args[0] + args[1];
                Some(((s % modm) << 1) | Val::from(s >= modm))
            }
            OpName::Difference => {
                let modm = modm?;
                let (a, b) = (args[0], args[1]);
                Some(if a >= b {
                    (a - b) << 1
                } else {
                    ((a + modm - b) << 1) | 1
                })
            }
            OpName::Multiply => {
                let modm = modm?;
                Some(((args[0] % modm) * (args[1] % modm)) % modm)
            }
            OpName::Divide | OpName::Division2 => {
                (args[1] != 0).then(|| args[0] / args[1])
            }
            OpName::Mod => (args[1] != 0).then(|| args[0] % args[1]),
            OpName::Exponential => Some(
                oracle::pow_below(args[0], args[1], limit).unwrap_or(OVERFLOW_SENTINEL),
            ),
            OpName::Logarithm => {
                (args[0] >= 2 && args[1] >= 1).then(|| oracle::ilog(args[0], args[1]))
            }
            OpName::CthRoot2 => Some(oracle::iroot(args[0], 2)),
            OpName::CthRoot3 => Some(oracle::iroot(args[0], 3)),
            OpName::GenRoot => {
                let (x, y) = (args[0], args[1]);
                if y == 0 {
                    None
                } else if y >= oracle::bit_length(x.max(1)) {
                    // 2^y > x, so the root is 1 for x ≥ 1 (and 0 for x = 0);
                    // this also covers exponents past u32 range.
                    Some(Val::from(x >= 1))
                } else {
                    Some(oracle::iroot(x, y as u32))
                }
            }
            OpName::Xor => Some(args[0] ^ args[1]),
            OpName::And => Some(args[0] & args[1]),
            OpName::Or => Some(args[0] | args[1]),
            OpName::Conc => {
                let v = oracle::conc(args[0], args[1]);
                conc_fits(args[0], args[1], limit).then_some(v)
            }
            OpName::Bit => Some(if args[1] >= 128 {
                0
            } else {
                oracle::bit(args[0], args[1] as u32)
            }),
            OpName::Substring => {
                let clamp = |v: Val| v.min(127) as u32;
                Some(oracle::substring(args[0], clamp(args[1]), clamp(args[2])))
            }
            OpName::Length => Some(oracle::bit_length(args[0])),
            OpName::CaIdentity => Some(args[0]),
            OpName::CaComplement => {
                let OpContext::Ca(t) = ctx else { return None };
                Some(((1u128 << t.big_l) - 1) ^ args[0])
            }
            OpName::CaParity => Some(Val::from(args[0].count_ones() % 2)),
        }
    }

    /// Runs the metered query; the value is encoded comparably to
    /// [`OpName::expected`] (flag folded into bit 0 for sum/difference,
    /// overflow as the sentinel).
    pub fn run(&self, ctx: &OpContext, args: &[Val]) -> Result<Metered<Val>, HarnessError> {
        if let OpContext::Ca(t) = ctx {
            return Ok(t.ca_op(args)?);
        }
        let OpContext::Arith(c) = ctx else {
            return Err(HarnessError::Input(
                "arithmetic query against a CA context".into(),
            ));
        };
        let fold = |m: Metered<(Val, bool)>| {
            Metered::new((m.value.0 << 1) | Val::from(m.value.1), m.steps)
        };
        Ok(match self {
            OpName::Sum => fold(c.sum(args[0], args[1])?),
            OpName::Difference => fold(c.difference(args[0], args[1])?),
            OpName::Multiply => c.multiply(args[0], args[1])?,
            OpName::Divide => c.divide(args[0], args[1])?,
            OpName::Mod => c.modulo(args[0], args[1])?,
            OpName::Division2 => c.division2(args[0], args[1])?,
            OpName::Exponential => {
                let m = c.exponential(args[0], args[1])?;
                let v = match m.value {
                    ExpOutcome::Value(v) => v,
                    ExpOutcome::Overflow => OVERFLOW_SENTINEL,
                };
                Metered::new(v, m.steps)
            }
            OpName::Logarithm => c.logarithm(args[0], args[1])?,
            OpName::CthRoot2 => c.cth_root(args[0], 2)?,
            OpName::CthRoot3 => c.cth_root(args[0], 3)?,
            OpName::GenRoot => c.gen_root(args[0], args[1])?,
            OpName::Xor => c.bit_xor(args[0], args[1])?,
            OpName::And => c.bit_and(args[0], args[1])?,
            OpName::Or => c.bit_or(args[0], args[1])?,
            OpName::Conc => c.conc(args[0], args[1])?,
            OpName::Bit => c.bit(args[0], args[1])?,
            OpName::Substring => c.substring(args[0], args[1], args[2])?,
            OpName::Length => c.length(args[0])?,
            _ => unreachable!("CA ops handled above"),
        })
    }

    /// Runs one query and classifies the outcome against the oracle.
    pub fn check_one(&self, ctx: &OpContext, args: &[Val]) -> Outcome {
        let expected = self.expected(ctx, args);
        match (expected, self.run(ctx, args)) {
            (Some(want), Ok(m)) if m.value == want => Outcome::Match { steps: m.steps },
            (Some(want), Ok(m)) => Outcome::Mismatch {
                detail: format!("{}{args:?}: got {}, expected {want}", self.name(), m.value),
            },
            (None, Err(_)) => Outcome::Match { steps: 0 },
            (_, Err(HarnessError::Arith(ArithError::UnsupportedExponent(_)))) => Outcome::Skip,
            (Some(want), Err(e)) => Outcome::Mismatch {
                detail: format!("{}{args:?}: error {e}, expected {want}", self.name()),
            },
            (None, Ok(m)) => Outcome::Mismatch {
                detail: format!(
                    "{}{args:?}: got {}, expected a domain error",
                    self.name(),
                    m.value
                ),
            },
        }
    }

    /// Calls `f` on every argument tuple of the exhaustive domain. Index
    /// arguments of `bit` and `substring` range over [0, L'+2] (behavior is
    /// uniform beyond the operand's bit length); everything else covers the
    /// full [0, N^d) grid, including out-of-domain rows (zero divisors,
    /// bases below 2) that must fail.
    pub fn for_each_exhaustive(
        &self,
        ctx: &OpContext,
        f: &mut impl FnMut(&[Val]),
    ) -> HarnessResult<()> {
        let limit = ctx.limit();
        match self {
            OpName::Sum
            | OpName::Difference
            | OpName::Multiply
            | OpName::Divide
            | OpName::Mod
            | OpName::Division2
            | OpName::Exponential
            | OpName::Logarithm
            | OpName::GenRoot
            | OpName::Xor
            | OpName::And
            | OpName::Or
            | OpName::Conc => {
                for a in 0..limit {
                    for b in 0..limit {
                        f(&[a, b]);
                    }
                }
            }
            OpName::CthRoot2
            | OpName::CthRoot3
            | OpName::Length
            | OpName::CaIdentity
            | OpName::CaComplement
            | OpName::CaParity => {
                for a in 0..limit {
                    f(&[a]);
                }
            }
            OpName::Bit => {
                let lp = oracle::bit_length(limit);
                for a in 0..limit {
                    for i in 0..=lp + 2 {
                        f(&[a, i]);
                    }
                }
            }
            OpName::Substring => {
                let lp = oracle::bit_length(limit);
                for a in 0..limit {
                    for i in 0..=lp + 2 {
                        for j in 0..=lp + 2 {
                            f(&[a, i, j]);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
