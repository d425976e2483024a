// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! One-dimensional cellular automata with a permanent boundary state, an
//! exact-linear-time output contract, and a block-simulation compiler that
//! turns a conforming automaton into constant-time lookup-table evaluation.
//!
//! Cells are numbered right to left: cell 0 is the rightmost active cell and
//! matches the least-significant digit of every encoded word. The boundary
//! state ♯ is permanent on the right: the region right of cell 0 never
//! activates, while the active window may grow leftward one cell per step.

pub mod automaton;
pub mod contract;
pub mod demos;
pub mod tables;

pub use automaton::{compose, CellularAutomaton, WordConfig};
pub use contract::{check_contract, check_linear_contract, ContractVerdict};
pub use tables::{build_ca_tables, CaTables};

use thiserror::Error;

/// Errors raised by automaton validation, composition, and table building.
#[derive(Debug, Error)]
pub enum CaError {
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("composition failed: {0}")]
    Composition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "block tables for N = {requested} exceed the linear build budget; \
         smallest admissible N is {minimum}"
    )]
    BuildTooSmall { requested: u64, minimum: u64 },

    #[error("operand {index} = {value} is out of range (must be below {limit})")]
    OperandOutOfRange {
        index: usize,
        value: u128,
        limit: u128,
    },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

/// Result alias for this crate.
pub type CaResult<T> = Result<T, CaError>;

/// Cell state. States are the integers 0..s−1.
pub type State = u16;
