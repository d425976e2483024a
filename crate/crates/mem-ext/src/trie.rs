// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Trie-backed emulation of k-dimensional arrays over one 2-D table.
//!
//! Each key component (below N) is rewritten in base B̂ = ⌊N^{1/(2d)}⌋,
//! giving a digit path of length k′ < 4dk per key. Starting from the root
//! node 0, the walk follows (and on demand allocates) child pointers held in
//! a logically (cN)×B̂ node table, physically re-indexed into N rows as
//! E[x div c][c·y + x mod c]. The final node id indexes the leaf-value
//! table. Every access costs O(k·d) steps, independent of N.

use arith_lib::{Meter, Metered};

use crate::{MemError, MemResult};

#[derive(Debug, Clone)]
pub struct TrieArray {
    n: u64,
    c: u64,
    k: usize,
    d: u32,
    /// B̂ = ⌊N^{1/(2d)}⌋.
    b_hat: u64,
    /// Digits per key component: smallest m with B̂^m ≥ N.
    digits: u32,
    /// E-encoded node table: N rows of c·B̂ child pointers (0 = absent).
    node: Vec<u64>,
    leaf_vals: Vec<u64>,
    nb_nodes: u64,
}

fn root_floor(x: u64, e: u32) -> u64 {
    let mut lo = 1u64;
    let mut hi = x + 1;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        match (mid as u128).checked_pow(e) {
            Some(p) if p <= x as u128 => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

impl TrieArray {
    /// A trie over keys of `k` components below `n`, with node budget c·n.
    pub fn new(n: u64, c: u64, k: usize, d: u32) -> MemResult<Self> {
        if n < 2 || c < 1 || k < 1 || d < 1 {
            return Err(MemError::Invalid(format!(
                "parameters N={n}, c={c}, k={k}, d={d} out of range"
            )));
        }
        let b_hat = root_floor(n, 2 * d);
        if b_hat < 2 {
            return Err(MemError::Invalid(format!(
                "N = {n} is too small for cutting parameter d = {d} (B̂ < 2)"
            )));
        }
        let mut digits = 1u32;
        let mut reach = b_hat as u128;
        while reach < n as u128 {
            reach *= b_hat as u128;
            digits += 1;
        }
        debug_assert!(digits < 4 * d, "path length must stay below 4dk");
        Ok(TrieArray {
            n,
            c,
            k,
            d,
            b_hat,
            digits,
            node: vec![0; (n * c * b_hat) as usize],
            leaf_vals: vec![0; (c * n) as usize],
            nb_nodes: 1, // the root
        })
    }

    pub fn b_hat(&self) -> u64 {
        self.b_hat
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn nb_nodes(&self) -> u64 {
        self.nb_nodes
    }

    #[inline]
    fn slot(&self, x: u64, y: u64) -> usize {
        // E[x div c][c·y + x mod c] over rows of width c·B̂.
        ((x / self.c) * (self.c * self.b_hat) + self.c * y + x % self.c) as usize
    }

    /// Walks the digit path of `key`, allocating missing nodes, and returns
    /// the leaf index.
    fn walk(&mut self, m: &mut Meter, key: &[u64]) -> MemResult<u64> {
        m.tick();
        if key.len() != self.k {
            return Err(MemError::KeyArity {
                got: key.len(),
                want: self.k,
            });
        }
        let cap = self.c * self.n;
        let mut cur = 0u64;
        for (pos, &v) in key.iter().enumerate() {
            m.tick();
            if v >= self.n {
                return Err(MemError::KeyOutOfRange {
                    index: pos,
                    value: v,
                    limit: self.n,
                });
            }
            // Base-B̂ digits of v, most significant first.
            let mut ds = [0u64; 64];
            let mut rest = v;
            for t in 0..self.digits as usize {
                ds[t] = rest % self.b_hat;
                rest /= self.b_hat;
                m.tick_n(2);
            }
            for t in (0..self.digits as usize).rev() {
                let slot = self.slot(cur, ds[t]);
                let mut child = self.node[slot];
                m.tick_n(2);
                if child == 0 {
                    m.tick_n(2);
                    if self.nb_nodes >= cap {
                        return Err(MemError::AllocationExhausted { cap });
                    }
                    child = self.nb_nodes;
                    self.nb_nodes += 1;
                    self.node[slot] = child;
                }
                cur = child;
            }
        }
        Ok(cur)
    }

    /// A[key] ← x.
    pub fn set(&mut self, key: &[u64], x: u64) -> MemResult<Metered<()>> {
        let mut m = Meter::new();
        let leaf = self.walk(&mut m, key)?;
        self.leaf_vals[leaf as usize] = x;
        m.tick();
        Ok(m.done(()))
    }

    /// A[key], creating the node path on demand; absent keys read as 0.
    pub fn get(&mut self, key: &[u64]) -> MemResult<Metered<u64>> {
        let mut m = Meter::new();
        let leaf = self.walk(&mut m, key)?;
        m.tick();
        Ok(m.done(self.leaf_vals[leaf as usize]))
    }
}

/// The key transform folding ℓ arrays of dimensions (cN)^k into one trie
/// with 2k+1 key components below N: component 0 selects the array, and
/// each original coordinate v_j (below cN) contributes u_{2j−1} = v_j div c
/// and u_{2j} = v_j mod c.
pub fn multi_array_key(array_index: u64, key: &[u64], c: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(2 * key.len() + 1);
    out.push(array_index);
    for &v in key {
        out.push(v / c);
        out.push(v % c);
    }
    out
}
