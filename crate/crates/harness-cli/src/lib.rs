// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Batch harness: operation registry, oracle checking, and step-metering
//! sweeps that turn "O(N) preprocessing, O(1) query" into pass/fail
//! measurements, plus a randomized structured-program corpus for exercising
//! the lowering pipeline.

pub mod corpus;
pub mod ops;
pub mod oracle;
pub mod report;
pub mod sweep;

pub use ops::{build_op_context, OpContext, OpName};
pub use oracle::{oracle_check, oracle_check_ctx, OracleMode, OracleReport};
pub use report::write_csv;
pub use sweep::{sweep, SweepConfig, SweepResult};

use thiserror::Error;

/// Process exit codes of the `ramharness` binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown operation: {0}")]
    UnknownOp(String),

    #[error(transparent)]
    Arith(#[from] arith_lib::ArithError),

    #[error(transparent)]
    Ca(#[from] ca_compile::CaError),

    #[error(transparent)]
    Ram(#[from] ram_core::RamError),

    #[error("query failed for {op} at N = {n}, sample {sample}: {detail}")]
    Query {
        op: String,
        n: u64,
        sample: usize,
        detail: String,
    },

    #[error("input error: {0}")]
    Input(String),
}

pub type HarnessResult<T> = Result<T, HarnessError>;
