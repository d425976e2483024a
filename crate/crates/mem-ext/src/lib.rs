// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Memory extensions for the addition-only RAM.
//!
//! [`LazyArray`] makes a region of uninitialized (possibly garbage) memory
//! behave as a zero-initialized array in constant time per access, using the
//! classic rank/inverse-rank certificate. [`TrieArray`] emulates a
//! k-dimensional array with huge index space over one two-dimensional table
//! by walking keys digit by digit in base B̂ = ⌊N^{1/(2d)}⌋, allocating
//! nodes on demand; accesses cost O(k·d) steps independent of N.

pub mod lazy;
pub mod trie;

pub use lazy::{LazyArray, LazyArrayK};
pub use trie::{multi_array_key, TrieArray};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MemError {
    #[error("index ({0}, {1}) outside array shape")]
    IndexOutOfBounds(u64, u64),

    #[error("key component {index} = {value} must be below {limit}")]
    KeyOutOfRange {
        index: usize,
        value: u64,
        limit: u64,
    },

    #[error("key has {got} components, expected {want}")]
    KeyArity { got: usize, want: usize },

    #[error("node allocation would exceed the c·N = {cap} budget")]
    AllocationExhausted { cap: u64 },

    #[error("invalid parameters: {0}")]
    Invalid(String),
}

pub type MemResult<T> = Result<T, MemError>;
