// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Lazy initialization: a raw storage region plus a rank certificate that
//! makes it observationally equal to a zero-initialized array.
//!
//! A cell (i, j) counts as initialized iff 1 ≤ rankInit[i][j] ≤ count and
//! rankInitInv[rankInit[i][j]] = (i, j); everything else — including
//! arbitrary garbage left in the tables — reads as 0. Every operation is a
//! constant number of steps.

use crate::{MemError, MemResult};

/// A lazily initialized 2-D array of u64 cells.
#[derive(Debug, Clone)]
pub struct LazyArray {
    rows: u64,
    cols: u64,
    data: Vec<u64>,
    rank_init: Vec<u64>,
    rank_init_inv: Vec<(u64, u64)>,
    count: u64,
}

impl LazyArray {
    /// Fresh array over zeroed storage.
    pub fn new(rows: u64, cols: u64) -> Self {
        let cells = (rows * cols) as usize;
        LazyArray {
            rows,
            cols,
            data: vec![0; cells],
            rank_init: vec![0; cells],
            rank_init_inv: vec![(0, 0); cells + 1],
            count: 0,
        }
    }

    /// Array over caller-provided storage that may contain arbitrary
    /// garbage in all three tables; behaves as all-zero regardless.
    pub fn from_garbage(
        rows: u64,
        cols: u64,
        data: Vec<u64>,
        rank_init: Vec<u64>,
        rank_init_inv: Vec<(u64, u64)>,
    ) -> MemResult<Self> {
        let cells = (rows * cols) as usize;
        if data.len() != cells || rank_init.len() != cells || rank_init_inv.len() != cells + 1 {
            return Err(MemError::Invalid(format!(
                "storage sizes {}/{}/{} do not match shape {rows}×{cols}",
                data.len(),
                rank_init.len(),
                rank_init_inv.len()
            )));
        }
        Ok(LazyArray {
            rows,
            cols,
            data,
            rank_init,
            rank_init_inv,
            count: 0,
        })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    fn idx(&self, i: u64, j: u64) -> MemResult<usize> {
        if i >= self.rows || j >= self.cols {
            return Err(MemError::IndexOutOfBounds(i, j));
        }
        Ok((i * self.cols + j) as usize)
    }

    fn is_init(&self, flat: usize, i: u64, j: u64) -> bool {
        let r = self.rank_init[flat];
        r >= 1 && r <= self.count && self.rank_init_inv[r as usize] == (i, j)
    }

    /// Marks (i, j) initialized (with value 0) if it is not already.
    pub fn init_cell(&mut self, i: u64, j: u64) -> MemResult<()> {
        let flat = self.idx(i, j)?;
        if !self.is_init(flat, i, j) {
            self.count += 1;
            self.rank_init[flat] = self.count;
            self.rank_init_inv[self.count as usize] = (i, j);
            self.data[flat] = 0;
        }
        Ok(())
    }

    /// A[i][j] ← x.
    pub fn store(&mut self, i: u64, j: u64, x: u64) -> MemResult<()> {
        self.init_cell(i, j)?;
        let flat = self.idx(i, j)?;
        self.data[flat] = x;
        Ok(())
    }

    /// A[i][j] if the cell has been initialized, and 0 otherwise.
    pub fn fetch(&self, i: u64, j: u64) -> MemResult<u64> {
        let flat = self.idx(i, j)?;
        Ok(if self.is_init(flat, i, j) {
            self.data[flat]
        } else {
            0
        })
    }
}

/// The same certificate over a k-dimensional shape (the 2-D construction
/// carries over unchanged by flattening the coordinate tuple).
#[derive(Debug, Clone)]
pub struct LazyArrayK {
    shape: Vec<u64>,
    data: Vec<u64>,
    rank_init: Vec<u64>,
    rank_init_inv: Vec<u64>,
    count: u64,
}

impl LazyArrayK {
    pub fn new(shape: &[u64]) -> Self {
        let cells: u64 = shape.iter().product();
        LazyArrayK {
            shape: shape.to_vec(),
            data: vec![0; cells as usize],
            rank_init: vec![0; cells as usize],
            rank_init_inv: vec![0; cells as usize + 1],
            count: 0,
        }
    }

    /// As [`LazyArray::from_garbage`], for k dimensions.
    pub fn from_garbage(
        shape: &[u64],
        data: Vec<u64>,
        rank_init: Vec<u64>,
        rank_init_inv: Vec<u64>,
    ) -> MemResult<Self> {
        let cells: u64 = shape.iter().product();
        if data.len() as u64 != cells
            || rank_init.len() as u64 != cells
            || rank_init_inv.len() as u64 != cells + 1
        {
            return Err(MemError::Invalid("storage sizes do not match shape".into()));
        }
        Ok(LazyArrayK {
            shape: shape.to_vec(),
            data,
            rank_init,
            rank_init_inv,
            count: 0,
        })
    }

    fn idx(&self, key: &[u64]) -> MemResult<u64> {
        if key.len() != self.shape.len() {
            return Err(MemError::KeyArity {
                got: key.len(),
                want: self.shape.len(),
            });
        }
        let mut flat = 0u64;
        for (pos, (&v, &dim)) in key.iter().zip(&self.shape).enumerate() {
            if v >= dim {
                return Err(MemError::KeyOutOfRange {
                    index: pos,
                    value: v,
                    limit: dim,
                });
            }
            flat = flat * dim + v;
        }
        Ok(flat)
    }

    fn is_init(&self, flat: u64) -> bool {
        let r = self.rank_init[flat as usize];
        r >= 1 && r <= self.count && self.rank_init_inv[r as usize] == flat
    }

    pub fn store(&mut self, key: &[u64], x: u64) -> MemResult<()> {
        let flat = self.idx(key)?;
        if !self.is_init(flat) {
            self.count += 1;
            self.rank_init[flat as usize] = self.count;
            self.rank_init_inv[self.count as usize] = flat;
        }
        self.data[flat as usize] = x;
        Ok(())
    }

    pub fn fetch(&self, key: &[u64]) -> MemResult<u64> {
        let flat = self.idx(key)?;
        Ok(if self.is_init(flat) {
            self.data[flat as usize]
        } else {
            0
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::HashMap;

    fn garbage_array(rows: u64, cols: u64, seed: u64) -> LazyArray {
        let mut rng = StdRng::seed_from_u64(seed);
        let cells = (rows * cols) as usize;
        LazyArray::from_garbage(
            rows,
            cols,
            (0..cells).map(|_| rng.gen()).collect(),
            // Adversarial ranks: plausible small values trying to look valid.
            (0..cells).map(|_| rng.gen_range(0..cells as u64 + 2)).collect(),
            (0..=cells)
                .map(|_| (rng.gen_range(0..rows), rng.gen_range(0..cols)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fetch_before_store_is_zero_despite_garbage() {
        let arr = garbage_array(17, 23, 0xbad5eed);
        for i in 0..17 {
            for j in 0..23 {
                assert_eq!(arr.fetch(i, j).unwrap(), 0);
            }
        }
    }

    #[test]
    fn store_then_fetch_roundtrips() {
        let mut arr = garbage_array(16, 16, 7);
        arr.store(5, 7, 42).unwrap();
        assert_eq!(arr.fetch(5, 7).unwrap(), 42);
        assert_eq!(arr.fetch(7, 5).unwrap(), 0);
    }

    #[test]
    fn overwrite_does_not_double_count() {
        let mut arr = garbage_array(8, 8, 9);
        arr.store(1, 2, 10).unwrap();
        arr.store(1, 2, 11).unwrap();
        arr.init_cell(1, 2).unwrap();
        assert_eq!(arr.count(), 1);
        assert_eq!(arr.fetch(1, 2).unwrap(), 11);
    }

    #[test]
    fn out_of_bounds_is_rejected() {
        let mut arr = LazyArray::new(4, 4);
        assert!(matches!(
            arr.store(4, 0, 1),
            Err(MemError::IndexOutOfBounds(4, 0))
        ));
        assert!(arr.fetch(0, 9).is_err());
    }

    #[test]
    fn generic_k_matches_oracle() {
        let shape = [6u64, 5, 4];
        let cells: u64 = shape.iter().product();
        let mut rng = StdRng::seed_from_u64(0x1234);
        let mut arr = LazyArrayK::from_garbage(
            &shape,
            (0..cells).map(|_| rng.gen()).collect(),
            (0..cells).map(|_| rng.gen_range(0..cells + 2)).collect(),
            (0..=cells).map(|_| rng.gen_range(0..cells)).collect(),
        )
        .unwrap();
        let mut oracle: HashMap<Vec<u64>, u64> = HashMap::new();
        for _ in 0..2000 {
            let key: Vec<u64> = shape.iter().map(|&d| rng.gen_range(0..d)).collect();
            if rng.gen_bool(0.5) {
                let x = rng.gen_range(0..1000);
                arr.store(&key, x).unwrap();
                oracle.insert(key, x);
            } else {
                let want = oracle.get(&key).copied().unwrap_or(0);
                assert_eq!(arr.fetch(&key).unwrap(), want);
            }
        }
    }

    proptest! {
        #[test]
        fn interleavings_match_zeroed_array(
            seed in any::<u64>(),
            ops in proptest::collection::vec((0u64..12, 0u64..10, 0u64..100, any::<bool>()), 1..200)
        ) {
            let mut arr = garbage_array(12, 10, seed);
            let mut oracle: HashMap<(u64, u64), u64> = HashMap::new();
            for (i, j, x, is_store) in ops {
                if is_store {
                    arr.store(i, j, x).unwrap();
                    oracle.insert((i, j), x);
                } else {
                    let want = oracle.get(&(i, j)).copied().unwrap_or(0);
                    prop_assert_eq!(arr.fetch(i, j).unwrap(), want);
                }
            }
            prop_assert_eq!(arr.count(), oracle.len() as u64);
        }
    }
}
