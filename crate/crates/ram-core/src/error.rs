// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors shared by the parsers and interpreters of all three instruction sets.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum RamError {
    /// The program text could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A write would have stored a value above the declared bound c·N.
    #[error("value {value} exceeds bound {bound} at pc {pc}")]
    ValueBoundExceeded { value: u64, bound: u64, pc: usize },

    /// `step` was invoked on a configuration whose pc already equals r.
    #[error("halt reached: pc is already at the end of the program")]
    HaltReached,

    /// The run exceeded the configured instruction budget.
    #[error("step budget of {max_steps} exceeded")]
    StepBudgetExceeded { max_steps: u64 },

    /// An input read addressed a cell outside I[0..N-1].
    #[error("input index {index} out of range for N = {n} at pc {pc}")]
    InputIndexOutOfRange { index: u64, n: u64, pc: usize },

    /// A graph edge mentions a vertex outside 1..=n.
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u64, n: u64 },

    /// The input violates a structural precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type RamResult<T> = Result<T, RamError>;
