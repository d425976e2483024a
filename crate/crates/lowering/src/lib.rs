// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Compilation between the structured language and the three RAM instruction
//! sets, plus lockstep verification of faithful simulation and the
//! log-and-undo wrapper for repeatable constant-time procedures.

pub mod check;
pub mod emap;
pub mod ir;
pub mod passes;
pub mod wrap;

pub use check::{check_faithful, identity_emap, AnyConfig, AnyProgram, Verdict};
pub use emap::{EmulationMap, RegMapSpec};
pub use ir::{
    lower_structured, Cond, FuncDef, Layout, LoweredStructured, LoweringError, LoweringResult,
    SExpr, Stmt, StructuredProgram,
};
pub use passes::{
    flatten_to_elementary, lower_ab_to_array, lower_array_to_r, lower_elementary_to_r,
    lower_r_to_ab, K_AB_TO_ARRAY, K_R_TO_AB,
};
pub use wrap::{repeat_wrapped, wrap_restorable};
