// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Core definitions of three equivalent RAM instruction sets whose only
//! primitive operation is addition, together with unit-cost interpreters.
//!
//! The three sets are:
//! - the accumulator/buffer set (`InstrAB`): two registers A and B plus
//!   indirectly addressed memory;
//! - the register set (`InstrR`): direct and indirect register addressing;
//! - the array set (`InstrArray`): integer variables, arrays and nested
//!   operation expressions.
//!
//! Inputs are word lists (N, I[0..N-1]) with every value bounded by c·N; the
//! interpreters enforce the bound on every write and charge exactly one step
//! per executed instruction.

pub mod error;
pub mod input;
pub mod machine;
pub mod parser;
pub mod program;

pub use error::{RamError, RamResult};
pub use input::{encode_graph_input, RamInput};
pub use machine::{
    run_ab, run_array, run_r, step_ab, step_array, step_r, ConfigAB, ConfigArray, ConfigR, Limits,
    RunResult, RunSummary, StepMeter,
};
pub use parser::{parse_ab, parse_array, parse_r, InstrSet};
pub use program::{Expr, InstrAB, InstrArray, InstrR, PrimOp, ProgramAB, ProgramArray, ProgramR};

/// Machine words are bounded naturals; the bound c·N is enforced dynamically.
pub type Word = u64;

/// Reference programs used across the workspace tests.
pub mod samples {
    /// 28-instruction accumulator/buffer program: sets R[1..N-1] to I[0],
    /// then outputs I[1]. Registers: i lives in R[0]; R[N] starts at 0 and
    /// becomes I[0] on the last iteration, ending the loop.
    ///
    /// The back-jump at index 24 targets index 8 so that the loop test
    /// re-reads R[N] into A before the conditional at index 10.
    pub const OUTPUT_I1_AB: &str = "\
CST 0      # A <- 0
Buffer     # B <- 0
getN       # A <- N
Store      # R[N] <- 0
CST 1      # A <- 1
Buffer     # B <- 1
CST 0      # A <- 0
Store      # R[0] <- 1, i.e. i <- 1
getN       # A <- N            (loop test)
Load       # A <- R[N]
Jzero 11 25  # enter loop while R[N] = 0
CST 0      # A <- 0            (loop body)
Input      # A <- I[0]
Buffer     # B <- I[0]
CST 0      # A <- 0
Load       # A <- R[0] = i
Store      # R[i] <- I[0]
Buffer     # B <- i
CST 1      # A <- 1
add        # A <- i + 1
Buffer     # B <- i + 1
Store      # R[i+1] <- i + 1
CST 0      # A <- 0
Store      # R[0] <- i + 1, i.e. i <- i + 1
Jzero 8 8  # back to the loop test
CST 1      # A <- 1            (loop end)
Input      # A <- I[1]
Output     # emit I[1]
";
}
